"""Recovering the catalog description of a Jordan algebra of symmetric matrices.

Scrambled inputs generally have no rational idempotents to find, so each
simple component is identified by a handful of dimensions that orthogonal
conjugation cannot change, compared against the same numbers computed for
every catalog label of the right size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .completion import assoc_closure, sym_dim
from .errors import InvalidFrameError, PreconditionError, StructureError
from .exactla import REAL, Mat, Subspace, nullspace_rows
from .jordancore import (MultialgebraInstance, _square_blocks, commuting_subspace, is_closed,
                         null_space, peirce_blocks, split_simple)
from .modular import fmpz_mat, primitive_rows
from .repforge import CatalogLabel, catalogBuild, catalog_labels


@dataclass(frozen=True)
class Fingerprint:
    ambientN: int
    algDim: int
    envelopeDim: int
    envelopeSymDim: int
    commutantDim: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.ambientN, self.algDim, self.envelopeDim, self.envelopeSymDim, self.commutantDim)

    def to_json(self) -> dict:
        return {"ambientN": self.ambientN, "algDim": self.algDim, "envelopeDim": self.envelopeDim,
                "envelopeSymDim": self.envelopeSymDim, "commutantDim": self.commutantDim}

    @classmethod
    def from_json(cls, obj: dict) -> "Fingerprint":
        return cls(**{k: int(obj[k]) for k in ("ambientN", "algDim", "envelopeDim",
                                               "envelopeSymDim", "commutantDim")})


def _corner_basis(pi: Subspace, N: Subspace) -> fmpz_mat:
    """Integer basis of ``{X : X = e X e}`` where ``e`` projects off the null space."""
    n = pi.shape[0]
    D = n * n
    if N.dim == 0:
        eye = fmpz_mat(D, D)
        for i in range(D):
            eye[i, i] = 1
        return eye
    # columns orthogonal to the null space span the range of e
    cols = primitive_rows(nullspace_rows(N.rows_matrix))
    rows = [[u[i] * v[j] for i in range(n) for j in range(n)] for u in cols for v in cols]
    return fmpz_mat(rows)


def envelope_commutant(pi: Subspace, E: Subspace, seed: int = 0) -> Subspace:
    """Matrices supported on the range of pi's unit that commute with all of ``E``."""
    n = pi.shape[0]
    V = _corner_basis(pi, null_space(pi))
    checks = _square_blocks(E.integer_basis(), n)
    rows = commuting_subspace(V, checks, n, seed)
    return Subspace.from_rows((n, n), REAL, rows)


def _fingerprint(inst: MultialgebraInstance, seed: int = 0) -> tuple[Fingerprint, Subspace]:
    pi = inst.pi
    n = inst.n
    E = assoc_closure(inst, seed)
    C = envelope_commutant(pi, E, seed)
    fp = Fingerprint(n - null_space(pi).dim, pi.dim, E.dim, sym_dim(E), C.dim)
    return fp, E


def fingerprint(pi: Subspace, mults: Subspace | None = None, seed: int = 0) -> Fingerprint:
    """Dimensions of pi, its envelope, the envelope's symmetric part and its commutant."""
    inst = MultialgebraInstance(pi, mults) if mults is not None else MultialgebraInstance.classical(pi)
    if not is_closed(inst):
        raise PreconditionError("fingerprints are only defined for closed instances")
    return _fingerprint(inst, seed)[0]


@lru_cache(maxsize=None)
def catalog_fingerprint(label: CatalogLabel) -> Fingerprint:
    return _fingerprint(MultialgebraInstance.classical(catalogBuild(label)))[0]


def candidate_labels(ambient: int, dim: int) -> list[CatalogLabel]:
    return [l for l in catalog_labels(ambient) if l.ambientN == ambient and l.alg_dim == dim]


def match_labels(fp: Fingerprint) -> list[CatalogLabel]:
    """Catalog labels of the same size whose fingerprint equals ``fp``.

    A single spin factor with ``N = 6`` is the quaternionic algebra with
    ``r = 2`` and appears only under that label.
    """
    return [l for l in candidate_labels(fp.ambientN, fp.algDim) if catalog_fingerprint(l) == fp]


def _power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass
class ComponentReport:
    carrier_dim: int
    fingerprint: Fingerprint
    labels: list[CatalogLabel]
    label_complete: bool | None      # None when the matched labels disagree or none matched
    engine_complete: bool
    algebra: Subspace | None = None

    @property
    def verdicts_agree(self) -> bool:
        return self.label_complete is None or self.label_complete == self.engine_complete

    def to_json(self) -> dict:
        return {"carrierDim": self.carrier_dim, "fingerprint": self.fingerprint.to_json(),
                "labels": [l.to_json() for l in self.labels],
                "ambiguous": len(self.labels) > 1,
                "labelComplete": self.label_complete, "engineComplete": self.engine_complete}


@dataclass
class ClassificationReport:
    nullDim: int
    components: list[ComponentReport] = field(default_factory=list)

    @property
    def verdicts_agree(self) -> bool:
        return all(c.verdicts_agree for c in self.components)

    def to_json(self) -> dict:
        return {"nullDim": self.nullDim, "components": [c.to_json() for c in self.components],
                "verdictsAgree": self.verdicts_agree}


def classifyAlgebra(pi: Subspace, seed: int = 0) -> ClassificationReport:
    """Null space, simple components, catalog labels and completeness of pi."""
    inst = MultialgebraInstance.classical(pi)
    if not is_closed(inst):
        raise PreconditionError("pi is not closed under the Jordan product")
    split = split_simple(pi, seed, check=False)
    comps = []
    for comp in split.components:
        fp, _ = _fingerprint(MultialgebraInstance.classical(comp.algebra), seed)
        labels = match_labels(fp)
        verdicts = {l.complete for l in labels}
        label_complete = verdicts.pop() if len(verdicts) == 1 else None
        engine_complete = fp.envelopeSymDim == fp.algDim
        irreducible = bool(labels) and all(l.multiplicity == 1 and l.form != "e" for l in labels)
        if irreducible and (fp.ambientN < 8 or not _power_of_two(fp.ambientN)) and not engine_complete:
            raise StructureError("irreducible component of size below 8 or not a power of 2 "
                                 "reported incomplete")
        comps.append(ComponentReport(comp.carrier_dim, fp, labels, label_complete,
                                     engine_complete, comp.algebra))
    return ClassificationReport(split.null_space.dim, comps)


def peirceInvariants(pi: Subspace, frame: Sequence[Mat]) -> tuple[int, int]:
    """``(r, p)``: frame size and the common dimension of the off-diagonal Peirce spaces."""
    dims = peirce_blocks(pi, frame)
    r = len(dims)
    if any(dims[i][i] != 1 for i in range(r)):
        raise InvalidFrameError("frame idempotents must be unresolvable")
    off = {dims[i][j] for i in range(r) for j in range(i + 1, r)}
    if len(off) > 1:
        raise InvalidFrameError("off-diagonal Peirce spaces differ in dimension")
    return r, off.pop() if off else 0


def fingerprint_collisions(max_ambient: int) -> list[list[CatalogLabel]]:
    """Groups of distinct catalog labels sharing size and fingerprint."""
    groups: dict[tuple, list[CatalogLabel]] = {}
    for l in catalog_labels(max_ambient):
        groups.setdefault(catalog_fingerprint(l).as_tuple(), []).append(l)
    return [g for g in groups.values() if len(g) > 1]

