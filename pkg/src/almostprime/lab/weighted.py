"""Richert's logarithmic weighted sum W(A; z, y) on a concrete progression.

Every route to W is a linear combination of 1 and the numbers
c_p / lambda with c_p = 1 - log p / log y.  Both the definition (sum of the
weights of the sifted members) and the expansion S(A, z) - (1/lambda)
sum_p c_p S(A_p, z) are therefore collected as integer coefficient vectors
``(constant, {p: coefficient})`` and compared exactly.  The floating value
is produced from a vector by one shared evaluation, so equal vectors give
bit-identical values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..bound_model import BoundParams
from ..errors import DegenerateCutoffs, NonCoprimeInput
from .factor import build_factor_table, primes_below

__all__ = ["WeightForm", "WeightedSumReport", "Cutoffs", "desk_cutoffs", "weighted_sum"]


@dataclass(frozen=True)
class WeightForm:
    """constant + (1/lambda) * sum_p coefficient_p * c_p with integer entries."""

    constant: int
    counts: tuple  # sorted (p, coefficient) pairs, zeros omitted

    def evaluate(self, lam: float, log_y: float) -> float:
        terms = [float(self.constant)]
        terms += [(k * (1.0 - math.log(p) / log_y)) / lam for p, k in self.counts]
        return math.fsum(terms)


def _form(constant: int, counts: dict) -> WeightForm:
    return WeightForm(constant, tuple(sorted((p, k) for p, k in counts.items() if k)))


@dataclass(frozen=True)
class Cutoffs:
    z: int
    y: int
    lam: float
    cut_8_23: float  # D^(8/23)
    M: float
    D: float
    mode: str


def desk_cutoffs(x: int, q: int, params: BoundParams) -> Cutoffs:
    """Realise z, y and the split points at desk scale.

    M = x/q, N = x^(1/2) q^(-3/4) and D = M N use the actual x and q;
    z = max(2, round(D^(5/23))), y = max(z + 1, round(q^delta)).
    """
    M = x / q
    N = math.sqrt(x) / q**0.75
    D = M * N
    z = max(2, round(D ** (5.0 / 23.0))) if D > 0 else 2
    y = max(z + 1, round(q**params.delta))
    lam = 3.0 - math.log(x) / math.log(y) - params.epsilon
    return Cutoffs(z=z, y=y, lam=lam, cut_8_23=D ** (8.0 / 23.0), M=M, D=D, mode="faithful")


@dataclass
class WeightedSumReport:
    x: int
    q: int
    a: int
    z: int
    y: int
    lam: float
    W: float  # via the definition
    W_expansion: float
    W_direct: float  # plain floating sum of per-member weights, for reference
    definition_form: WeightForm
    expansion_form: WeightForm
    size_A: int
    S_Az: int
    S_Ap: dict  # p -> S(A_p, z) for z <= p < y, p not dividing q
    split: tuple  # three partial sums of c_p S(A_p, z): [z, D^8/23), [D^8/23, M), [M, y)
    count_p2: int
    weight_p2: float
    count_squarefull_tail: int  # sifted, Omega >= 3, mu = 0
    weight_squarefull_tail: float
    negative_checked: int  # squarefree, Omega >= 3, primes in [z, y)
    negative_violations: list = field(default_factory=list)
    core_W: float = 0.0  # W without n = 1 and the squarefull tail
    cutoffs: Cutoffs | None = None

    @property
    def forms_agree(self) -> bool:
        return self.definition_form == self.expansion_form

    @property
    def p2_implied(self) -> bool:
        """core_W > 0 forces a member with Omega <= 2, since every squarefree
        member with Omega >= 3 has negative weight."""
        return self.core_W > 0.0

    def breakdown_rows(self) -> list[dict]:
        log_y = math.log(self.y)
        return [
            {"p": p, "c_p": 1.0 - math.log(p) / log_y, "S_Ap": k}
            for p, k in sorted(self.S_Ap.items())
        ]


def weighted_sum(
    x: int,
    q: int,
    a: int,
    params: BoundParams | None = None,
    *,
    z: int | None = None,
    y: int | None = None,
) -> WeightedSumReport:
    """Compute W(A; z, y) for A = {n <= x : n = a mod q} two ways.

    With ``z`` and ``y`` omitted the cutoffs follow :func:`desk_cutoffs`;
    passing both selects the free-choice mode.
    """
    params = params or BoundParams(1.8345, 0.86)
    if math.gcd(a, q) != 1:
        raise NonCoprimeInput(f"gcd({a}, {q}) != 1")
    if not (q >= 2 and x >= q):
        raise ValueError("need x >= q >= 2")
    if not 1 <= a <= q:
        raise ValueError("need 1 <= a <= q")
    cut = desk_cutoffs(x, q, params)
    if (z is None) != (y is None):
        raise ValueError("pass both z and y, or neither")
    if z is not None:
        lam = 3.0 - math.log(x) / math.log(y) - params.epsilon
        cut = Cutoffs(z=z, y=y, lam=lam, cut_8_23=cut.cut_8_23, M=cut.M, D=cut.D, mode="free")
    z, y, lam = cut.z, cut.y, cut.lam
    if z < 2:
        raise DegenerateCutoffs(f"z={z} < 2")
    if y <= z:
        raise DegenerateCutoffs(f"y={y} <= z={z}")
    if not lam > 0.0:
        raise DegenerateCutoffs(f"lambda = {lam} <= 0 for x={x}, y={y}")
    log_y = math.log(y)

    small = [p for p in primes_below(z).tolist() if q % p]
    P_z = math.prod(small)
    members = range(a, x + 1, q)
    table = build_factor_table(2, max(2, x))

    # Definition route: walk the sifted members and their prime factors.
    def_const = 0
    def_counts: dict = {}
    direct_terms = []
    count_p2 = 0
    w_p2 = []
    sqfull_count = 0
    w_sqfull = []
    w_one = 0.0
    neg_checked = 0
    violations = []
    for n in members:
        fac = table.factorize(n) if n > 1 else []
        if fac and fac[0] < z:
            continue
        distinct = sorted(set(fac))
        window = [p for p in distinct if z <= p < y]
        def_const += 1
        for p in window:
            def_counts[p] = def_counts.get(p, 0) - 1
        w = 1.0 - math.fsum(1.0 - math.log(p) / log_y for p in window) / lam
        direct_terms.append(w)
        omega = len(fac)
        squarefree = len(distinct) == omega
        if n == 1:
            w_one = w
        elif omega <= 2:
            count_p2 += 1
            w_p2.append(w)
        elif not squarefree:
            sqfull_count += 1
            w_sqfull.append(w)
        else:
            if all(z <= p < y for p in distinct):
                neg_checked += 1
                if not w < 0.0:
                    violations.append((n, w))

    # Expansion route: S(A, z) and S(A_p, z) by gcd tests on the progression.
    s_az = sum(1 for n in members if math.gcd(n, P_z) == 1)
    s_ap = {}
    for p in primes_below(y).tolist():
        if p < z or q % p == 0:
            continue
        # n = a (mod q), n = 0 (mod p): first such member, then step p*q.
        first = a + ((-a * pow(q, -1, p)) % p) * q
        s_ap[p] = sum(1 for n in range(first, x + 1, p * q) if math.gcd(n, P_z) == 1)

    definition_form = _form(def_const, def_counts)
    expansion_form = _form(s_az, {p: -k for p, k in s_ap.items()})

    def part(lo: float, hi: float) -> float:
        return math.fsum(
            (1.0 - math.log(p) / log_y) * k for p, k in s_ap.items() if lo <= p < hi
        )

    c1 = min(max(cut.cut_8_23, z), y)
    c2 = min(max(cut.M, c1), y)
    split = (part(z, c1), part(c1, c2), part(c2, y))

    W_def = definition_form.evaluate(lam, log_y)
    W_exp = expansion_form.evaluate(lam, log_y)
    core = math.fsum([W_def, -w_one, -math.fsum(w_sqfull)])
    return WeightedSumReport(
        x=x,
        q=q,
        a=a,
        z=z,
        y=y,
        lam=lam,
        W=W_def,
        W_expansion=W_exp,
        W_direct=math.fsum(direct_terms),
        definition_form=definition_form,
        expansion_form=expansion_form,
        size_A=len(members),
        S_Az=s_az,
        S_Ap=s_ap,
        split=split,
        count_p2=count_p2,
        weight_p2=math.fsum(w_p2),
        count_squarefull_tail=sqfull_count,
        weight_squarefull_tail=math.fsum(w_sqfull),
        negative_checked=neg_checked,
        negative_violations=violations,
        core_W=core,
        cutoffs=cut,
    )
