"""Closed-form bounds on maximal order types of finite-image transfinite words."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from finseq import ordinal as o
from finseq.ordinal import OMEGA, ONE, ZERO, Ordinal, as_ordinal

__all__ = [
    "h_fun",
    "pq",
    "fg",
    "FG",
    "upper_omega_k",
    "UpperOmegaK",
    "alpha_split",
    "upper_alpha",
    "upper_alpha_refined",
    "upper_alpha_plain",
    "u_fun",
    "lower_report",
    "BoundReport",
    "report",
    "minus_two_plus",
]


def h_fun(beta) -> Ordinal:
    """Type of the Higman word order ``X*`` as a function of the type of ``X``."""
    beta = as_ordinal(beta)
    if beta.is_zero():
        return ONE
    if beta.is_finite():
        return o.omega_pow(o.omega_pow(int(beta) - 1))
    if o.is_epsilon_plus_finite(beta):  # pragma: no cover - no epsilon numbers below epsilon_0
        return o.omega_pow(o.omega_pow(o.ord_add(beta, 1)))
    return o.omega_pow(o.omega_pow(beta))


def pq(k: int, beta) -> Tuple[Ordinal, Ordinal]:
    """``(p_k(beta), q_k(beta))``: ``p_0 = beta``, ``q_k = (+)_{i<k} p_i``, ``p_k = -1 + 2^q_k``."""
    if k < 0:
        raise ValueError("k must be a whole number")
    beta = as_ordinal(beta)
    p, q = beta, ZERO
    for _ in range(k):
        q = o.nat_add(q, p)
        p = o.minus_one_plus(o.two_pow(q))
    return p, q


@dataclass(frozen=True)
class FG:
    f: Ordinal
    g: Ordinal
    p_plus: Ordinal
    g_plus: Ordinal


def fg(k: int, beta) -> FG:
    p, q = pq(k, beta)
    f = h_fun(q)
    p_plus = o.ord_add(1, p)
    return FG(f, o.nat_mul(f, p), p_plus, o.nat_mul(f, p_plus))


@dataclass(frozen=True)
class UpperOmegaK:
    finseq: Ordinal
    finseqeq: Ordinal
    indec: Ordinal

    def __iter__(self):
        return iter((self.finseq, self.finseqeq, self.indec))


def upper_omega_k(k: int, beta) -> UpperOmegaK:
    """Bounds for words of length ``< w^k``, ``= w^k`` and indecomposable of length ``w^k``."""
    p, q = pq(k, beta)
    f = h_fun(q)
    return UpperOmegaK(f, o.nat_mul(f, p), p)


def alpha_split(alpha) -> Tuple[list[int], int]:
    """Write ``alpha < w^w`` as ``w^k0 + ... + w^kr + l`` with all ``k_i > 0``."""
    alpha = as_ordinal(alpha)
    ks = []
    for e, c in alpha.terms:
        if not e.is_finite():
            raise ValueError(f"alpha = {alpha} is not below w^w")
        if not e.is_zero():
            ks.extend([int(e)] * c)
    return ks, alpha.finite_part()


def _nat_prod_g(ks, beta) -> Ordinal:
    return o.nat_prod(fg(k, beta).g for k in ks)


def upper_alpha_plain(alpha, beta) -> Ordinal:
    """Bound from splitting at the first CNF prefix the word is shorter than."""
    ks, ell = alpha_split(alpha)
    ks = ks + [0] * ell
    return o.nat_sum(o.nat_mul(fg(k, beta).f, _nat_prod_g(ks[:i], beta)) for i, k in enumerate(ks))


def upper_alpha_refined(alpha, beta) -> Optional[Ordinal]:
    """Sharper bound when ``alpha`` has a nonzero finite part and an infinite part."""
    ks, ell = alpha_split(alpha)
    beta = as_ordinal(beta)
    if ell == 0 or not ks:
        return None
    r = len(ks) - 1
    head = upper_alpha_plain(Ordinal([(k, 1) for k in ks[:r]]), beta) if r else ZERO
    middle = o.nat_mul(fg(ks[r], beta).g_plus, _nat_prod_g(ks[:r], beta))
    full = _nat_prod_g(ks, beta)
    tail = o.nat_sum(o.nat_mul(o.nat_prod([beta] * t), full) for t in range(1, ell))
    return o.nat_sum([head, middle, tail])


def upper_alpha(alpha, beta, mode: str = "finseq") -> Ordinal:
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha.is_zero():
        raise ValueError("alpha must be at least 1")
    if mode == "finseqeq":
        ks, ell = alpha_split(alpha)
        return _nat_prod_g(ks + [0] * ell, beta)
    if mode != "finseq":
        raise ValueError(f"unknown mode {mode!r}")
    plain = upper_alpha_plain(alpha, beta)
    refined = upper_alpha_refined(alpha, beta)
    return plain if refined is None else min(plain, refined)


def u_fun(beta) -> Ordinal:
    beta = as_ordinal(beta)
    if beta.is_zero():
        return ONE
    ok, pred = o.successor_split(beta)
    if ok:
        return h_fun(o.minus_one_plus(o.two_pow(pred)))
    return o.omega_pow(o.omega_pow(o.two_pow(beta)))


def minus_two_plus(x) -> Ordinal:
    """``-2 + x``; undefined (ValueError) for ``x < 2``."""
    return o.minus_one_plus(o.minus_one_plus(x))


def lower_report(alpha, beta) -> Tuple[Ordinal, bool]:
    """Lower bound and whether it is known to be exact.

    ``alpha = w^2``: bound for words of length ``< w^2``.
    ``alpha = w``: bound for indecomposable words of length ``w``.
    """
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    if alpha == o.omega_pow(2):
        return u_fun(beta), False
    if alpha == OMEGA:
        if beta.is_zero():
            # no letters, no words of length w
            return ZERO, True
        ok, pred = o.successor_split(beta)
        if ok:
            return o.minus_one_plus(o.two_pow(pred)), False
        return o.minus_one_plus(o.two_pow(beta)), True
    raise ValueError(f"no lower bound known for alpha = {alpha}")


_NOTES = {
    "upper_finseq": "Higman type of q_k for words shorter than w^k",
    "upper_finseq_general": "smallest prefix split over the CNF of alpha",
    "upper_finseq_refined": "refined finite-part theorem",
    "upper_finseqeq": "h(q_k) (x) p_k",
    "upper_finseqeq_general": "natural product of g_k over the CNF of alpha",
    "upper_indec": "p_k",
    "lower_finseq": "u(beta) via H_beta",
    "lower_indec": "-1 + 2^(beta-1) via finite powersets of H",
}


@dataclass
class BoundReport:
    alpha: Ordinal
    beta: Ordinal
    upper_finseq: Ordinal
    upper_finseqeq: Optional[Ordinal] = None
    upper_indec: Optional[Ordinal] = None
    lower_finseq: Optional[Ordinal] = None
    lower_indec: Optional[Ordinal] = None
    lower_indec_exact: Optional[bool] = None
    provenance: Dict[str, str] = field(default_factory=dict)

    def fields(self) -> Dict[str, Ordinal]:
        names = ["upper_finseq", "upper_finseqeq", "upper_indec", "lower_finseq", "lower_indec"]
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}

    def to_dict(self) -> dict:
        out = {"alpha": str(self.alpha), "beta": str(self.beta)}
        out.update({k: str(v) for k, v in self.fields().items()})
        if self.lower_indec_exact is not None:
            out["lower_indec_exact"] = self.lower_indec_exact
        out["provenance"] = dict(self.provenance)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"alpha = {self.alpha}", f"beta = {self.beta}"]
        for k, v in self.fields().items():
            lines.append(f"{k} = {v}    [{self.provenance.get(k, '')}]")
        return "\n".join(lines)


def report(alpha, beta) -> BoundReport:
    alpha, beta = as_ordinal(alpha), as_ordinal(beta)
    ks, ell = alpha_split(alpha)
    prov: Dict[str, str] = {}
    power = alpha.is_omega_power()
    if power:
        k = int(alpha.leading_exponent())
        up = upper_omega_k(k, beta)
        rep = BoundReport(alpha, beta, up.finseq, up.finseqeq, up.indec)
        prov.update(upper_finseq=_NOTES["upper_finseq"], upper_finseqeq=_NOTES["upper_finseqeq"], upper_indec=_NOTES["upper_indec"])
    else:
        plain = upper_alpha_plain(alpha, beta)
        refined = upper_alpha_refined(alpha, beta)
        if refined is not None and refined <= plain:
            rep = BoundReport(alpha, beta, refined)
            prov["upper_finseq"] = _NOTES["upper_finseq_refined"]
        else:
            rep = BoundReport(alpha, beta, plain)
            prov["upper_finseq"] = _NOTES["upper_finseq_general"]
    if alpha == o.omega_pow(2):
        rep.lower_finseq, _ = lower_report(alpha, beta)
        prov["lower_finseq"] = _NOTES["lower_finseq"]
    if alpha == OMEGA:
        rep.lower_indec, rep.lower_indec_exact = lower_report(alpha, beta)
        prov["lower_indec"] = _NOTES["lower_indec"]
    rep.provenance = prov
    if rep.lower_finseq is not None and rep.lower_finseq > rep.upper_finseq:
        raise AssertionError("lower bound exceeds upper bound")
    if rep.lower_indec is not None and rep.lower_indec > rep.upper_indec:
        raise AssertionError("lower bound exceeds upper bound")
    return rep
