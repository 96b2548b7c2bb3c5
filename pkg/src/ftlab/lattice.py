"""Planar and toric surface-code lattices with syndrome-extraction circuits.

Geometry: qubits live on a (2d-1)x(2d-1) grid (planar, d odd) or a 2Lx2L
periodic grid (toric). Data qubits sit on sites with r+c even; star (X-type)
ancillas on (even r, odd c); plaquette (Z-type) ancillas on (odd r, even c).
Each ancilla touches its four grid neighbors (fewer on a planar boundary,
giving the weight-3 boundary stabilizers).

The planar logical pair: X_L runs down the west column (data (2i, 0)),
Z_L along the north row (data (0, 2j)); both have weight d and cross between
opposite boundaries. Toric uses the analogous non-contractible loops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .pauli import PauliString, pauli_multiply
from .codes import StabilizerCode
from .circuit import Circuit, Element, pad_layer, cx, measure_z, measure_x, prep_z, prep_x

# data-contact order for every ancilla within one extraction round
DIRECTIONS = ("N", "E", "W", "S")
_STEP = {"N": (-1, 0), "E": (0, 1), "W": (0, -1), "S": (1, 0)}


@dataclass(frozen=True)
class SurfaceLattice:
    topology: str  # "planar" | "toric"
    size: int  # d (planar) or L (toric)
    nrows: int
    ncols: int
    data_sites: tuple
    x_sites: tuple  # star ancilla sites
    z_sites: tuple  # plaquette ancilla sites

    # -- index maps ------------------------------------------------------

    @cached_property
    def data_index(self):
        return {s: i for i, s in enumerate(self.data_sites)}

    @cached_property
    def x_index(self):
        return {s: i for i, s in enumerate(self.x_sites)}

    @cached_property
    def z_index(self):
        return {s: i for i, s in enumerate(self.z_sites)}

    @property
    def n_data(self) -> int:
        return len(self.data_sites)

    @property
    def n_qubits(self) -> int:
        """Total qubit count including both ancilla species."""
        return self.n_data + len(self.x_sites) + len(self.z_sites)

    def data_qubit(self, site) -> int:
        return self.data_index[site]

    def ancilla_qubit(self, species: str, site) -> int:
        if species == "x":
            return self.n_data + self.x_index[site]
        return self.n_data + len(self.x_sites) + self.z_index[site]

    # -- geometry --------------------------------------------------------

    def wrap(self, site):
        if self.topology == "toric":
            return (site[0] % self.nrows, site[1] % self.ncols)
        return site

    def in_bounds(self, site) -> bool:
        if self.topology == "toric":
            return True
        r, c = site
        return 0 <= r < self.nrows and 0 <= c < self.ncols

    def neighbors(self, site) -> dict:
        """Existing data neighbors of an ancilla site, keyed by direction."""
        out = {}
        for d in DIRECTIONS:
            dr, dc = _STEP[d]
            nb = (site[0] + dr, site[1] + dc)
            if self.in_bounds(nb):
                out[d] = self.wrap(nb)
        return out

    def support(self, site) -> list:
        return [self.neighbors(site)[d] for d in DIRECTIONS if d in self.neighbors(site)]

    # -- operators over data qubits ---------------------------------------

    def stabilizer(self, species: str, site) -> PauliString:
        letter = "X" if species == "x" else "Z"
        p = PauliString.identity(self.n_data)
        for s in self.support(site):
            p = pauli_multiply(p, PauliString.single(self.n_data, self.data_index[s], letter))
        return p

    @cached_property
    def logical_x(self) -> PauliString:
        p = PauliString.identity(self.n_data)
        for r in range(0, self.nrows, 2):
            p = pauli_multiply(p, PauliString.single(self.n_data, self.data_index[(r, 0)], "X"))
        return p

    @cached_property
    def logical_z(self) -> PauliString:
        p = PauliString.identity(self.n_data)
        for c in range(0, self.ncols, 2):
            p = pauli_multiply(p, PauliString.single(self.n_data, self.data_index[(0, c)], "Z"))
        return p

    def as_code(self) -> StabilizerCode:
        stabs = [self.stabilizer("x", s) for s in self.x_sites]
        stabs += [self.stabilizer("z", s) for s in self.z_sites]
        return StabilizerCode(
            n=self.n_data,
            stabilizers=stabs,
            logical_x=self.logical_x,
            logical_z=self.logical_z,
            distance=self.size,
            name=f"{self.topology}({self.size})",
        )

    # -- decoding geometry -------------------------------------------------

    def species_sites(self, species: str):
        return self.x_sites if species == "x" else self.z_sites

    def site_distance(self, a, b) -> int:
        """Lattice steps between two same-species ancilla sites."""
        dr = abs(a[0] - b[0])
        dc = abs(a[1] - b[1])
        if self.topology == "toric":
            dr = min(dr, self.nrows - dr)
            dc = min(dc, self.ncols - dc)
        return (dr + dc) // 2

    def boundary_distance(self, species: str, site) -> int:
        """Steps to the nearest boundary that absorbs this species' defects.

        Error chains detected by plaquettes (X errors) terminate on the
        north/south edges; chains detected by stars terminate west/east.
        Toric lattices have no boundary (returns a large sentinel).
        """
        if self.topology == "toric":
            return 10 ** 9
        r, c = site
        if species == "z":
            return min((r + 1) // 2, (self.nrows - r) // 2)
        return min((c + 1) // 2, (self.ncols - c) // 2)

    def _axis_path(self, a, b, axis):
        """Same-species sites from a to b varying one axis, minimal wrap."""
        n = self.nrows if axis == 0 else self.ncols
        start, stop = a[axis], b[axis]
        delta = stop - start
        if self.topology == "toric":
            if delta > n // 2:
                delta -= n
            elif delta < -n // 2:
                delta += n
        step = 2 if delta > 0 else -2
        sites = []
        cur = list(a)
        for _ in range(abs(delta) // 2):
            nxt = cur.copy()
            nxt[axis] += step
            mid = cur.copy()
            mid[axis] += step // 2
            sites.append((self.wrap(tuple(mid)), self.wrap(tuple(nxt))))
            cur = nxt
        return sites

    def correction_path(self, species: str, a, b) -> list[int]:
        """Data qubits of a canonical minimal chain joining two events.

        Moves along rows first, then columns; on the torus the shorter wrap
        direction wins (ties resolved toward increasing coordinate). Returns
        data qubit indices; XOR of these with the true error support is a
        cycle or boundary-to-boundary chain.
        """
        qubits = []
        cur = a
        for mid, nxt in self._axis_path(a, (b[0], a[1]), 0):
            qubits.append(self.data_index[mid])
            cur = nxt
        for mid, nxt in self._axis_path(cur, b, 1):
            qubits.append(self.data_index[mid])
            cur = nxt
        return qubits

    def boundary_path(self, species: str, site) -> list[int]:
        """Data qubits of the straight chain from `site` out its nearest edge."""
        if self.topology == "toric":
            raise ValueError("toric lattice has no boundary")
        r, c = site
        qubits = []
        if species == "z":
            north, south = (r + 1) // 2, (self.nrows - r) // 2
            if north <= south:
                rows = range(r - 1, -1, -2)
                qubits = [self.data_index[(rr, c)] for rr in rows]
            else:
                qubits = [self.data_index[(rr, c)] for rr in range(r + 1, self.nrows, 2)]
        else:
            west, east = (c + 1) // 2, (self.ncols - c) // 2
            if west <= east:
                qubits = [self.data_index[(r, cc)] for cc in range(c - 1, -1, -2)]
            else:
                qubits = [self.data_index[(r, cc)] for cc in range(c + 1, self.ncols, 2)]
        return qubits

    def to_json(self) -> dict:
        return {
            "topology": self.topology,
            "size": self.size,
            "grid": [self.nrows, self.ncols],
            "data_sites": [list(s) for s in self.data_sites],
            "x_sites": [list(s) for s in self.x_sites],
            "z_sites": [list(s) for s in self.z_sites],
            "x_supports": {
                str(i): sorted(self.data_index[s] for s in self.support(site))
                for i, site in enumerate(self.x_sites)
            },
            "z_supports": {
                str(i): sorted(self.data_index[s] for s in self.support(site))
                for i, site in enumerate(self.z_sites)
            },
            "logical_x": self.logical_x.letters(),
            "logical_z": self.logical_z.letters(),
        }


def surface_lattice(topology: str, size: int) -> SurfaceLattice:
    """Build a planar(d) or toric(L) lattice.

    planar: d odd, d >= 1; data count d^2 + (d-1)^2.
    toric: L >= 2; 2L^2 data qubits plus L^2 ancillas of each species.
    """
    if topology == "planar":
        d = size
        if d < 1 or d % 2 == 0:
            raise ValueError(f"planar distance must be odd and >= 1, got {d}")
        nrows = ncols = 2 * d - 1
    elif topology == "toric":
        if size < 2:
            raise ValueError(f"toric size must be >= 2, got {size}")
        nrows = ncols = 2 * size
    else:
        raise ValueError(f"unknown topology {topology!r}")
    data, xs, zs = [], [], []
    for r in range(nrows):
        for c in range(ncols):
            if (r + c) % 2 == 0:
                data.append((r, c))
            elif r % 2 == 0:
                xs.append((r, c))
            else:
                zs.append((r, c))
    return SurfaceLattice(topology, size, nrows, ncols, tuple(data), tuple(xs), tuple(zs))


def _round_tag(species: str, index: int, rnd: int) -> str:
    return f"{species}{index}@{rnd}"


def parse_tag(tag: str):
    species = tag[0]
    idx, rnd = tag[1:].split("@")
    return species, int(idx), int(rnd)


def surface_syndrome_circuit(lat: SurfaceLattice, rounds: int) -> Circuit:
    """Syndrome-extraction circuit for `rounds` full rounds of both species.

    Planar: both species run in lockstep, six layers per round (prep, four
    same-direction CNOT layers N-E-W-S, measure). Same-direction layers are
    conflict-free because the two species contact opposite data sublattices.

    Toric: the star schedule is offset half a round so measurement layers
    alternate species; every measurement layer reads exactly one quarter of
    all qubits and data qubits are never measured.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    n = lat.n_qubits
    n_layers = 6 * rounds if lat.topology == "planar" else 6 * rounds + 3
    slots: list[list[Element]] = [[] for _ in range(n_layers)]
    x_offset = 0 if lat.topology == "planar" else 3

    for k in range(rounds):
        zbase = 6 * k
        for i, site in enumerate(lat.z_sites):
            anc = lat.ancilla_qubit("z", site)
            slots[zbase].append(prep_z(anc))
            nbrs = lat.neighbors(site)
            for j, d in enumerate(DIRECTIONS):
                if d in nbrs:
                    slots[zbase + 1 + j].append(cx(lat.data_qubit(nbrs[d]), anc))
            slots[zbase + 5].append(measure_z(anc, _round_tag("z", i, k)))
        xbase = 6 * k + x_offset
        for i, site in enumerate(lat.x_sites):
            anc = lat.ancilla_qubit("x", site)
            slots[xbase].append(prep_x(anc))
            nbrs = lat.neighbors(site)
            for j, d in enumerate(DIRECTIONS):
                if d in nbrs:
                    slots[xbase + 1 + j].append(cx(anc, lat.data_qubit(nbrs[d])))
            slots[xbase + 5].append(measure_x(anc, _round_tag("x", i, k)))

    layers = [pad_layer(slot, n) for slot in slots]
    meta = {
        "lattice": {"topology": lat.topology, "size": lat.size},
        "rounds": rounds,
        "data_qubits": list(range(lat.n_data)),
        "round_layers": [6 * k for k in range(rounds)],
        "n_x": len(lat.x_sites),
        "n_z": len(lat.z_sites),
    }
    return Circuit(n, layers, metadata=meta)


def measured_fraction_per_slice(circuit: Circuit):
    """(layer index, measured qubit fraction, measured qubit list) for every
    layer containing at least one measurement."""
    out = []
    for li, layer in enumerate(circuit.layers):
        measured = [el.qubits[0] for el in layer if el.op in ("MZ", "MX")]
        if measured:
            out.append((li, len(measured) / circuit.n_qubits, measured))
    return out
