"""Exact linear algebra over the rationals for sparse vectors.

Vectors are dicts mapping hashable, mutually comparable keys to Fractions.
The row basis keeps every stored row reduced against the others and carries a
certificate (a combination of the originally inserted vectors) for each row,
so membership answers come with an exactly checkable witness either way:
a combination reproducing the query, or a nonzero residual.
"""

from __future__ import annotations

from fractions import Fraction


Vector = dict


def vec_scale(vec: Vector, c: Fraction) -> Vector:
    if not c:
        return {}
    return {k: v * c for k, v in vec.items()}


def vec_add_scaled(target: Vector, src: Vector, c: Fraction) -> Vector:
    """target + c*src as a new dict, dropping exact zeros."""
    if not c:
        return dict(target)
    out = dict(target)
    for k, v in src.items():
        total = out.get(k, Fraction(0)) + c * v
        if total:
            out[k] = total
        else:
            out.pop(k, None)
    return out


class RowBasis:
    """Incremental reduced row basis with membership certificates."""

    def __init__(self):
        # parallel lists: pivot key, reduced row, certificate over inserted vectors
        self.pivots: list = []
        self.rows: list[Vector] = []
        self.certs: list[Vector] = []
        self.inserted = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Vector, cert: Vector):
        vec = dict(vec)
        cert = dict(cert)
        for pivot, row, row_cert in zip(self.pivots, self.rows, self.certs):
            c = vec.get(pivot)
            if c:
                vec = vec_add_scaled(vec, row, -c)
                cert = vec_add_scaled(cert, row_cert, -c)
        return vec, cert

    def add(self, vec: Vector, label=None) -> bool:
        """Insert a vector; returns True if it enlarged the span.

        ``label`` names the vector in certificates (defaults to its insertion
        index).
        """
        if label is None:
            label = self.inserted
        self.inserted += 1
        residual, cert = self._reduce(vec, {label: Fraction(1)})
        if not residual:
            return False
        pivot = min(residual)
        inv = Fraction(1) / residual[pivot]
        residual = vec_scale(residual, inv)
        cert = vec_scale(cert, inv)
        # back-substitute into existing rows so the basis stays fully reduced
        for i, row in enumerate(self.rows):
            c = row.get(pivot)
            if c:
                self.rows[i] = vec_add_scaled(row, residual, -c)
                self.certs[i] = vec_add_scaled(self.certs[i], cert, -c)
        self.pivots.append(pivot)
        self.rows.append(residual)
        self.certs.append(cert)
        return True

    def reduce(self, vec: Vector):
        """Return (residual, certificate): vec = sum(cert)·inserted + residual."""
        residual, cert = self._reduce(vec, {})
        return residual, vec_scale(cert, Fraction(-1))


class Membership:
    """Outcome of a span-membership query with an exact witness."""

    def __init__(self, member: bool, certificate: Vector, residual: Vector):
        self.member = member
        self.certificate = certificate
        self.residual = residual

    def __bool__(self) -> bool:
        return self.member


def solve_membership(span: list[Vector], query: Vector, labels=None) -> Membership:
    """Decide whether query lies in the rational span of the given vectors."""
    basis = RowBasis()
    for i, vec in enumerate(span):
        basis.add(vec, label=(labels[i] if labels is not None else i))
    residual, cert = basis.reduce(query)
    return Membership(not residual, cert, residual)


def verify_certificate(span: list[Vector], query: Vector, cert: Vector, labels=None) -> bool:
    """Recompute sum(cert)·span and compare against query exactly."""
    index = {}
    for i, vec in enumerate(span):
        index[labels[i] if labels is not None else i] = vec
    acc: Vector = {}
    for label, c in cert.items():
        acc = vec_add_scaled(acc, index[label], c)
    return acc == query
