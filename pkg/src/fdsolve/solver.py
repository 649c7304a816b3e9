"""Closed-form solving of P(T) y = phi for constant-coefficient operators.

The particular solution comes from mechanically inverting the operator one
right-hand-side term at a time:

* geometric terms divide by the characteristic value P(base);
* cos/sin terms divide by P evaluated at the parity (-1)^n of the frequency;
* polynomial payloads go through the forward-difference basis, where the
  reciprocal operator is a terminating power series;
* resonant bases (characteristic roots) factor the root out, conjugate the
  operator by base^t, and invert the leftover D^m by antidifferencing.

Every step is recorded in a `SolveTrace` whose final state renders the
returned particular solution verbatim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .algebra import Poly, Root, RootSet, find_roots, series_inverse
from .expr import SequenceExpr, Term, Trig, _render_base_power
from .operators import OperatorPoly


class SingularSystemError(ValueError):
    """Initial conditions are inconsistent or do not pin the constants."""


@dataclass(frozen=True)
class TraceStep:
    rule: str
    detail: str
    before: str
    after: str


@dataclass(frozen=True)
class SolveTrace:
    steps: tuple[TraceStep, ...]

    def render(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            lines.append(f"{i}. [{s.rule}] {s.detail}")
            lines.append(f"   {s.before}  =>  {s.after}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ExactMode:
    """Homogeneous basis sequence with an exact closed form (rational root)."""

    expr: SequenceExpr

    def value_at(self, t: int) -> Fraction:
        return self.expr.eval_at(t)

    def render(self, pretty: bool = False) -> str:
        return self.expr.render(pretty)


@dataclass(frozen=True)
class NumericMode:
    """Basis sequence modulus^t * t^power * cos/sin(angle*t) for irrational roots."""

    modulus: float
    angle: float
    power: int
    kind: str

    def value_at(self, t: int) -> float:
        osc = math.cos(self.angle * t) if self.kind == "cos" else math.sin(self.angle * t)
        return self.modulus**t * float(t**self.power) * osc

    def render(self, pretty: bool = False) -> str:
        pieces = [f"{self.modulus:.10g}^t"]
        if self.power:
            pieces.append("t" if self.power == 1 else f"t^{self.power}")
        if self.angle:
            pieces.append(f"{self.kind}({self.angle:.10g}*t)")
        return " * ".join(pieces)


HomogeneousMode = Union[ExactMode, NumericMode]

Condition = tuple[int, Fraction]


@dataclass(frozen=True)
class Equation:
    """P(T) y = rhs, optionally with consecutive initial values of y."""

    operator: OperatorPoly
    rhs: SequenceExpr
    initial: tuple[Condition, ...] | None = None

    def __post_init__(self) -> None:
        if self.operator.degree < 1:
            raise ValueError("difference operator must have degree >= 1")
        if self.initial is not None:
            conds = tuple(sorted((int(t), Fraction(v)) for t, v in self.initial))
            if len(conds) != self.operator.degree:
                raise ValueError(
                    f"need exactly {self.operator.degree} initial values, got {len(conds)}"
                )
            for (t0, _), (t1, _) in zip(conds, conds[1:]):
                if t1 != t0 + 1:
                    raise ValueError("initial conditions must be at consecutive integers")
            object.__setattr__(self, "initial", conds)

    def __str__(self) -> str:
        lhs = []
        for k in range(self.operator.degree, -1, -1):
            a = self.operator.coeffs[k]
            if a == 0:
                continue
            mag = abs(a)
            arg = "t" if k == 0 else f"t+{k}"
            body = f"y({arg})" if mag == 1 else f"{mag}*y({arg})"
            if not lhs:
                lhs.append(body if a > 0 else f"-{body}")
            else:
                lhs.append(f" + {body}" if a > 0 else f" - {body}")
        return f"{''.join(lhs)} = {self.rhs}"


@dataclass(frozen=True)
class Solution:
    particular: SequenceExpr
    homogeneous: tuple[HomogeneousMode, ...]
    constants: tuple[Fraction, ...] | tuple[float, ...] | None
    trace: SolveTrace

    @property
    def is_exact(self) -> bool:
        return all(isinstance(m, ExactMode) for m in self.homogeneous)

    def general_expr(self) -> SequenceExpr | None:
        """particular + sum(c_i * mode_i) as one expression, when fully exact."""
        if self.constants is None or not self.is_exact:
            return None
        total = self.particular
        for c, mode in zip(self.constants, self.homogeneous):
            total = total + mode.expr.scaled(c)
        return total

    def general_value_at(self, t: int) -> Fraction | float:
        if self.constants is None:
            raise ValueError("constants were not fitted (no initial conditions)")
        acc: Fraction | float = self.particular.eval_at(t)
        for c, mode in zip(self.constants, self.homogeneous):
            acc = acc + c * mode.value_at(t)
        return acc


def antidifference(p: Poly, m: int = 1) -> Poly:
    """m-fold antidifference of p with all summation constants zero.

    Work happens in the falling-factorial basis, where each basis element
    t*(t-1)*...*(t-k+1) maps to the next one divided by k+1; the zero constant
    term means every returned polynomial vanishes at t = 0.

    >>> str(antidifference(Poly(1)))
    't'
    >>> str(antidifference(Poly(0, 1), 1))
    '1/2*t^2 - 1/2*t'
    """
    out = p
    for _ in range(m):
        ff = out.to_falling_factorial()
        out = Poly.from_falling_factorial(
            (Fraction(0),) + tuple(a / (k + 1) for k, a in enumerate(ff))
        )
    return out


def _pending(op_str: str, payload: str) -> str:
    return f"[1/({op_str})]({payload})"


def _powstr(base: Fraction) -> str:
    return _render_base_power(base, 0)


def _series_str(cs: Sequence[Fraction]) -> str:
    parts = []
    for k, c in enumerate(cs):
        if c == 0 and len(cs) > 1:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "D" if k == 1 else f"D^{k}"
            body = var if mag == 1 else f"{mag}*{var}"
        if not parts:
            parts.append(body if c >= 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c >= 0 else f" - {body}")
    return "".join(parts) if parts else "0"


def _term_str(term: Term) -> str:
    return str(SequenceExpr.of(term))


def _conjugated_operator(P: OperatorPoly, beta: Fraction) -> tuple[Poly, Poly]:
    """(ptilde, q) with P(T) = ptilde(T - beta) and q(D) the operator left
    on the polynomial factor once beta^t is pulled out (T maps to beta*(1+D))."""
    ptilde = P.taylor_shifted(beta)
    q = Poly(c * beta**k for k, c in enumerate(ptilde.coeffs))
    return ptilde, q


def _solve_term(P: OperatorPoly, term: Term) -> tuple[SequenceExpr, list[TraceStep]]:
    c, lam, p, trig = term.coeff, term.base, term.poly, term.trig
    mu = trig.parity if trig else Fraction(1)
    beta = lam * mu
    m, _ = P.factor_root(beta)
    steps: list[TraceStep] = []
    current = _pending(str(P), _term_str(term))

    if m == 0 and p.degree == 0:
        if trig is None and lam != 1:
            val = c / P(lam)
            res = SequenceExpr.of(Term(val, lam))
            steps.append(TraceStep(
                "power-rule",
                f"geometric right side: divide by P({lam}) = {P(lam)}",
                current, str(res)))
            return res, steps
        if trig is not None and lam == 1:
            val = c / P(mu)
            res = SequenceExpr.of(Term(val, 1, Poly(1), trig))
            steps.append(TraceStep(
                f"{trig.kind}-rule",
                f"{trig.kind}({trig.n}*pi*t) right side: divide by P((-1)^{trig.n}) = P({mu}) = {P(mu)}",
                current, str(res)))
            return res, steps
        if trig is not None and lam != 1:
            scaled = P.scale_argument(lam)
            after_scale = f"{_powstr(lam)} * " + _pending(
                str(scaled), _term_str(Term(c, 1, Poly(1), trig)))
            steps.append(TraceStep(
                "scale-rule",
                f"extract the factor {_powstr(lam)}: the remaining operator is P({lam}*T) = {scaled}",
                current, after_scale))
            val = c / P(beta)
            res = SequenceExpr.of(Term(val, lam, Poly(1), trig))
            steps.append(TraceStep(
                f"{trig.kind}-rule",
                f"evaluate {scaled} at (-1)^{trig.n} = {mu}: {P(beta)}",
                after_scale, str(res)))
            return res, steps

    out_base, out_trig = lam, trig
    if trig is not None:
        if m >= 1:
            if trig.kind == "sin":
                res = SequenceExpr.zero()
                steps.append(TraceStep(
                    "resonant-trig",
                    f"P({beta}) = 0, but sin({trig.n}*pi*t) is 0 at every integer t, "
                    "so this term needs no particular contribution",
                    current, "0"))
                return res, steps
            folded = _pending(str(P), _term_str(Term(c, beta, p)))
            steps.append(TraceStep(
                "resonant-trig",
                f"P({beta}) = 0; on integer t, cos({trig.n}*pi*t) equals ({mu})^t, "
                f"so continue with geometric base {beta}",
                current, folded))
            current = folded
            out_base, out_trig = beta, None
        elif lam != 1:
            scaled = P.scale_argument(lam)
            after_scale = f"{_powstr(lam)} * " + _pending(
                str(scaled), _term_str(Term(c, 1, p, trig)))
            steps.append(TraceStep(
                "scale-rule",
                f"extract the factor {_powstr(lam)}: the remaining operator is P({lam}*T) = {scaled}",
                current, after_scale))
            current = after_scale

    # forward-difference machinery at base beta
    h = p * c
    ptilde, q = _conjugated_operator(P, beta)
    assert all(ptilde[i] == 0 for i in range(m)), "root multiplicity mismatch"
    R = Poly(q.coeffs[m:])
    order = max(h.degree, 0)
    cs = series_inverse(R, order)

    prefix = "" if out_base == 1 and out_trig is None else (
        _powstr(out_base) + " * " if out_trig is None
        else f"{_powstr(lam)} * {out_trig.render()} * " if lam != 1
        else f"{out_trig.render()} * ")
    q_str = _series_str(tuple(q.coeffs))
    if beta == 1:
        steps.append(TraceStep(
            "delta-basis",
            f"set D = T - 1: the operator becomes {q_str}",
            current, f"{prefix}{_pending(q_str, str(h))}"))
    else:
        steps.append(TraceStep(
            "shift-theorem",
            f"conjugating by {_powstr(beta)} maps T to {beta}*(1 + D), "
            f"so the operator on the polynomial factor is {q_str}",
            current, f"{prefix}{_pending(q_str, str(h))}"))
    current = f"{prefix}{_pending(q_str, str(h))}"

    w = Poly()
    d = h
    for k in range(order + 1):
        w = w + d * cs[k]
        d = d.forward_difference()
    r = antidifference(w, m)
    res = SequenceExpr.of(Term(1, out_base, r, out_trig))

    if m == 0:
        steps.append(TraceStep(
            "series-inverse",
            f"invert the unit-constant series: 1/({_series_str(tuple(R.coeffs))}) = "
            f"{_series_str(cs)} + O(D^{order + 1}), exact on degree-{order} payloads",
            current, str(res)))
        return res, steps

    mid = f"{prefix}{_pending(_series_str((Fraction(0),) * m + (Fraction(1),)), str(w))}"
    steps.append(TraceStep(
        "series-inverse",
        f"split off D^{m}: 1/({_series_str(tuple(R.coeffs))}) = {_series_str(cs)} "
        f"+ O(D^{order + 1}), exact on degree-{order} payloads",
        current, mid))
    steps.append(TraceStep(
        "propagation",
        f"invert D^{m} by antidifferencing {m} time(s) in the falling-factorial "
        "basis (summation constants 0)",
        mid, str(res)))
    return res, steps


def solve_particular(op: OperatorPoly, phi: SequenceExpr) -> tuple[SequenceExpr, SolveTrace]:
    """One closed-form y with op(T) y = phi; no homogeneous admixture is chosen.

    The returned trace replays the computation; its last step's `after`
    renders the returned expression exactly.
    """
    steps: list[TraceStep] = []
    k, P = op.reduce_shift()
    if phi.is_zero:
        steps.append(TraceStep(
            "zero-rhs", "a zero right-hand side has the zero particular solution",
            "0", "0"))
        return SequenceExpr.zero(), SolveTrace(tuple(steps))
    terms = phi.terms
    if len(terms) > 1:
        steps.append(TraceStep(
            "linearity",
            "the inverse operator is linear: invert each right-hand term separately",
            _pending(str(P), str(phi)),
            " ; ".join(_pending(str(P), _term_str(t)) for t in terms)))
    parts: list[SequenceExpr] = []
    for term in terms:
        e, s = _solve_term(P, term)
        parts.append(e)
        steps.extend(s)
    total = SequenceExpr.zero()
    for e in parts:
        total = total + e
    if len(terms) > 1:
        steps.append(TraceStep(
            "linearity", "sum the per-term contributions",
            " ; ".join(str(e) if not e.is_zero else "0" for e in parts), str(total)))
    if k:
        shifted = total.shift(-k)
        steps.append(TraceStep(
            "inverse-translation",
            f"invert the factor T^{k} by translating the argument by -{k}",
            str(total), str(shifted)))
        total = shifted
    return total, SolveTrace(tuple(steps))


def solve_homogeneous(op: OperatorPoly) -> tuple[HomogeneousMode, ...]:
    """Basis of the solution space of op(T) y = 0 on two-sided integer time.

    Rational characteristic roots give exact modes t^j * root^t; irrational or
    complex roots give float modes in polar form.  Roots at 0 contribute no
    two-sided mode and are skipped.
    """
    roots = find_roots(op.as_poly())
    modes: list[HomogeneousMode] = []
    for root in roots.roots:
        if root.exact:
            if root.value == 0:
                continue
            for j in range(root.multiplicity):
                modes.append(ExactMode(
                    SequenceExpr.of(Term(1, root.value, Poly(0, 1) ** j))))
        else:
            z = root.value
            if z.imag < 0:
                continue  # conjugate partner of an emitted pair
            r, theta = abs(z), math.atan2(z.imag, z.real)
            for j in range(root.multiplicity):
                modes.append(NumericMode(r, theta, j, "cos"))
                if z.imag > 0:
                    modes.append(NumericMode(r, theta, j, "sin"))
    return tuple(modes)


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> tuple[Fraction, ...]:
    rows, cols = len(A), len(A[0]) if A else 0
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    piv_rows: list[int] = []
    row = 0
    for col in range(cols):
        sel = next((i for i in range(row, rows) if aug[i][col] != 0), None)
        if sel is None:
            raise SingularSystemError("initial conditions leave a constant free")
        aug[row], aug[sel] = aug[sel], aug[row]
        lead = aug[row][col]
        aug[row] = [v / lead for v in aug[row]]
        for i in range(rows):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[row])]
        piv_rows.append(row)
        row += 1
    for i in range(row, rows):
        if aug[i][cols] != 0:
            raise SingularSystemError("initial conditions are inconsistent")
    return tuple(aug[i][cols] for i in range(cols))


_FLOAT_PIVOT_TOL = 1e-12


def _solve_float(A: list[list[float]], b: list[float]) -> tuple[float, ...]:
    rows, cols = len(A), len(A[0]) if A else 0
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    row = 0
    for col in range(cols):
        sel = max(range(row, rows), key=lambda i: abs(aug[i][col]), default=None)
        if sel is None or abs(aug[sel][col]) <= _FLOAT_PIVOT_TOL:
            raise SingularSystemError("pivot below tolerance; constants not determined")
        aug[row], aug[sel] = aug[sel], aug[row]
        lead = aug[row][col]
        aug[row] = [v / lead for v in aug[row]]
        for i in range(rows):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[row])]
        row += 1
    scale = max([1.0] + [abs(v) for v in b])
    for i in range(row, rows):
        if abs(aug[i][cols]) > 1e-6 * scale:
            raise SingularSystemError("initial conditions are inconsistent")
    return tuple(aug[i][cols] for i in range(cols))


def fit_constants(
    op: OperatorPoly,
    particular: SequenceExpr,
    basis: Sequence[HomogeneousMode],
    initial: Sequence[Condition],
) -> tuple[Fraction, ...] | tuple[float, ...]:
    """Constants c_i with particular + sum c_i * basis_i matching the initial values.

    Exact Gaussian elimination when every mode is exact; otherwise float
    elimination with partial pivoting.
    """
    conds = sorted((int(t), Fraction(v)) for t, v in initial)
    if len(conds) != op.degree:
        raise ValueError(f"need exactly {op.degree} initial values, got {len(conds)}")
    exact = all(isinstance(m, ExactMode) for m in basis)
    if exact:
        A = [[m.value_at(t) for m in basis] for t, _ in conds]
        b = [v - particular.eval_at(t) for t, v in conds]
        return _solve_exact(A, b)
    Af = [[float(m.value_at(t)) for m in basis] for t, _ in conds]
    bf = [float(v - particular.eval_at(t)) for t, v in conds]
    return _solve_float(Af, bf)


def solve(eq: Equation) -> Solution:
    """Full pipeline: particular + homogeneous basis + (optional) constants."""
    particular, trace = solve_particular(eq.operator, eq.rhs)
    basis = solve_homogeneous(eq.operator)
    constants = None
    if eq.initial is not None:
        constants = fit_constants(eq.operator, particular, basis, eq.initial)
    return Solution(particular, basis, constants, trace)
