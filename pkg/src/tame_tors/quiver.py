"""Quivers: Euler and Tits forms, Coxeter transformation, classification.

Vertices are numbered ``1..n``; dimension vectors are tuples of length ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce

from .exact_linalg import QQ, inverse, matmul, nullspace, transpose


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class QuiverType:
    tag: str  # "Dynkin" | "ExtendedDynkin" | "Wild"
    delta: tuple | None = None

    def __str__(self):
        if self.tag == "ExtendedDynkin":
            return "ExtendedDynkin, delta=[" + ",".join(map(str, self.delta)) + "]"
        return self.tag


class Quiver:
    """A finite acyclic quiver.

    Args:
        n: number of vertices, labelled ``1..n``.
        arrows: ``(label, source, target)`` triples; labels must be unique.
    """

    def __init__(self, n: int, arrows):
        self.n = int(n)
        self.arrows = tuple((str(l), int(s), int(t)) for l, s, t in arrows)
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise QuiverError("arrow labels must be unique")
        for l, s, t in self.arrows:
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise QuiverError(f"arrow {l} has an endpoint outside 1..{self.n}")
        if self.topological_order() is None:
            raise QuiverError("quiver has an oriented cycle")

    # -- basic structure -------------------------------------------------

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def arrow_index(self, label: str) -> int:
        for k, a in enumerate(self.arrows):
            if a[0] == label:
                return k
        raise KeyError(label)

    def topological_order(self):
        indeg = {v: 0 for v in range(1, self.n + 1)}
        for _, s, t in self.arrows:
            indeg[t] += 1
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for _, s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
                        ready.sort()
        return order if len(order) == self.n else None

    def opposite(self) -> "Quiver":
        return Quiver(self.n, [(l, t, s) for l, s, t in self.arrows])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for _, s, t in self.arrows:
                for a, b in ((s, t), (t, s)):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == self.n

    @cached_property
    def _paths(self):
        """All paths as tuples of arrow indices, keyed by (start, end)."""
        out = {(v, v): [()] for v in self.vertices}
        order = self.topological_order()
        for v in reversed(order):
            for k, (_, s, t) in enumerate(self.arrows):
                if s != v:
                    continue
                for (a, b), ps in list(out.items()):
                    if a == t:
                        out.setdefault((v, b), [])
                        out[(v, b)].extend((k,) + p for p in ps)
        for key in out:
            out[key] = sorted(out[key], key=lambda p: (len(p), p))
        return out

    def paths(self, i: int, j: int):
        """Paths from ``i`` to ``j`` in traversal order (tuples of arrow indices)."""
        return self._paths.get((i, j), [])

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.n == other.n and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.n, self.arrows))

    def __repr__(self):
        return f"Quiver({self.n}, {list(self.arrows)})"

    # -- forms -------------------------------------------------------------

    def _check(self, d):
        if len(d) != self.n:
            raise QuiverError(f"dimension vector {tuple(d)} has length {len(d)}, expected {self.n}")

    @cached_property
    def euler_matrix(self):
        C = [[0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            C[i][i] = 1
        for _, s, t in self.arrows:
            C[s - 1][t - 1] -= 1
        return C

    def euler_form(self, d, e) -> int:
        """<d, e> = sum d_i e_i - sum over arrows i->j of d_i e_j."""
        self._check(d)
        self._check(e)
        val = sum(x * y for x, y in zip(d, e))
        for _, s, t in self.arrows:
            val -= d[s - 1] * e[t - 1]
        return val

    def tits_form(self, d) -> int:
        return self.euler_form(d, d)

    @cached_property
    def symmetric_matrix(self):
        C = self.euler_matrix
        return [[C[i][j] + C[j][i] for j in range(self.n)] for i in range(self.n)]

    @cached_property
    def quiver_type(self) -> QuiverType:
        return classify(self)

    @property
    def delta(self):
        qt = self.quiver_type
        if qt.tag != "ExtendedDynkin":
            raise QuiverError("quiver is not extended Dynkin")
        return qt.delta

    def defect(self, d) -> int:
        """<delta, d>: negative on preprojectives, zero on regulars, positive on preinjectives."""
        return self.euler_form(self.delta, d)

    @cached_property
    def coxeter_matrix(self):
        # Phi = -C^{-1} C^T, so that <x, y> = -<y, Phi x> and Phi(dim P(i)) = -dim I(i).
        C = [[QQ(x) for x in row] for row in self.euler_matrix]
        M = matmul(inverse(C, QQ), transpose(C), QQ)
        return [[-int(x) for x in row] for row in M]

    @cached_property
    def inverse_coxeter_matrix(self):
        C = [[QQ(x) for x in row] for row in self.euler_matrix]
        M = matmul(inverse(transpose(C), QQ), C, QQ)
        return [[-int(x) for x in row] for row in M]

    def coxeter_transform(self, d, direction: str = "forward"):
        self._check(d)
        M = self.coxeter_matrix if direction == "forward" else self.inverse_coxeter_matrix
        if direction not in ("forward", "inverse"):
            raise ValueError("direction must be 'forward' or 'inverse'")
        return tuple(sum(M[i][j] * d[j] for j in range(self.n)) for i in range(self.n))

    def dim_projective(self, i: int):
        return tuple(len(self.paths(i, v)) for v in self.vertices)

    def dim_injective(self, i: int):
        return tuple(len(self.paths(v, i)) for v in self.vertices)

    @cached_property
    def coxeter_period(self) -> int:
        """Smallest h with (Phi^h - 1) mapping into Z*delta (extended Dynkin only)."""
        delta = self.delta
        n = self.n
        M = [row[:] for row in self.coxeter_matrix]
        P = [[int(i == j) for j in range(n)] for i in range(n)]
        for h in range(1, 400):
            P = [[sum(M[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            ok = True
            for j in range(n):
                col = [P[i][j] - (1 if i == j else 0) for i in range(n)]
                # col must be a rational multiple of delta
                ratios = {(col[i], delta[i]) for i in range(n)}
                r = None
                for c, dl in ratios:
                    q = QQ(c) / dl
                    if r is None:
                        r = q
                    elif q != r:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return h
        raise QuiverError("Coxeter period not found")  # pragma: no cover


def classify(Q: Quiver) -> QuiverType:
    """Dynkin iff the Tits form is positive definite; extended Dynkin iff it is
    positive semidefinite of corank one with a sincere positive radical vector
    (and Q connected); otherwise Wild."""
    S = [[QQ(x) for x in row] for row in Q.symmetric_matrix]
    n = Q.n
    M = [row[:] for row in S]
    zero_pivots = 0
    psd = True
    for k in range(n):
        p = M[k][k]
        if p < 0:
            psd = False
            break
        if p == 0:
            if any(M[k][j] != 0 for j in range(k, n)):
                psd = False
                break
            zero_pivots += 1
            continue
        for i in range(k + 1, n):
            f = M[i][k] / p
            if f == 0:
                continue
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    if not psd:
        return QuiverType("Wild")
    if zero_pivots == 0:
        return QuiverType("Dynkin")
    if zero_pivots == 1 and Q.is_connected():
        v = nullspace(S, QQ)[0]
        den = reduce(math.lcm, (int(x.denominator) for x in v), 1)
        ints = [int(x * den) for x in v]
        g = reduce(math.gcd, (abs(x) for x in ints), 0)
        ints = [x // g for x in ints]
        if all(x < 0 for x in ints):
            ints = [-x for x in ints]
        if all(x > 0 for x in ints):
            return QuiverType("ExtendedDynkin", tuple(ints))
    return QuiverType("Wild")


# -- text format -------------------------------------------------------------


def parse_quiver(text: str) -> Quiver:
    """Parse the line format::

        # comment
        vertices 3
        arrow a 1 2
        arrow b 2 3
    """
    n = None
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices" and len(parts) == 2:
            if n is not None:
                raise QuiverError(f"line {lineno}: duplicate 'vertices'")
            n = int(parts[1])
        elif parts[0] == "arrow" and len(parts) == 4:
            arrows.append((parts[1], int(parts[2]), int(parts[3])))
        else:
            raise QuiverError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise QuiverError("missing 'vertices' line")
    return Quiver(n, arrows)


def format_quiver(Q: Quiver) -> str:
    lines = [f"vertices {Q.n}"]
    lines += [f"arrow {l} {s} {t}" for l, s, t in Q.arrows]
    return "\n".join(lines) + "\n"


# -- standard quivers ---------------------------------------------------------


def kronecker(m: int = 2) -> Quiver:
    """Generalized Kronecker quiver 1 => 2 with ``m`` arrows."""
    labels = "abcdefgh"
    return Quiver(2, [(labels[k], 1, 2) for k in range(m)])


def linear_A(n: int) -> Quiver:
    return Quiver(n, [(f"a{i}", i, i + 1) for i in range(1, n)])


def D4_tilde() -> Quiver:
    """Four-subspace orientation: leaves 2..5 point into the central vertex 1."""
    return Quiver(5, [(f"a{i}", i, 1) for i in range(2, 6)])


def A2_tilde() -> Quiver:
    """Triangle with arrows 1->2->3 and 1->3."""
    return Quiver(3, [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)])
