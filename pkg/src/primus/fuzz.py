"""Restriction-property fuzz harness.

Each trial builds a set that is primitive by construction and supported
on an initial segment a_1..a_l of the basis: the images of a_1..a_k under
a random automorphism of the rank-l free group, reinterpreted at the
ambient rank (the automorphism extends by fixing the remaining
generators, so primitivity at the ambient rank holds in every variety).
The trial then re-decides primitivity at the ambient rank and at rank l.
A decisive NotPrimitive at either rank would contradict a theorem or
expose a decider bug, so it is recorded with a full reproducer and the
caller is expected to exit loudly; Unknown verdicts are only counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import abelian, laurent, nilpotent, solvable, stallings
from .words import (VarietySpec, change_rank, extend_automorphism, format_word,
                    generator_word, random_automorphism)

DEFAULT_MAX_STEPS = 6


@dataclass
class FuzzReport:
    variety: VarietySpec
    rank: int
    l: int
    k: int
    trials: int
    seed: int = 0
    passes: int = 0
    unknowns: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {
            "variety": self.variety.to_json(),
            "rank": self.rank,
            "l": self.l,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "passes": self.passes,
            "unknowns": self.unknowns,
            "failures": self.failures,
        }


def check_fuzz_regime(variety, rank, l, k):
    """Reject parameter combinations outside the supported/decidable
    regime before any trial runs."""
    if not 1 <= l < rank:
        raise ValueError("l must lie in 1..rank-1")
    if not 1 <= k <= l:
        raise ValueError("k must lie in 1..l")
    if variety.kind == "AmAn" and variety.m == 0 and variety.n > 0:
        if k == rank - 1 or k == l - 1:
            raise ValueError("the criterion is unavailable at m=0, n>0 when "
                             "k equals r-1 or l-1")
    if variety.kind == "Solvable":
        if variety.t != 2:
            raise ValueError("solvable fuzzing is implemented for derived "
                             "length 2 (witness verification only beyond)")
        if k != rank - 1 or l != rank - 1:
            raise ValueError("the solvable case needs |S| = r-1 supported on "
                             "the first r-1 generators")


def _decide(variety, words_seq, rank, budgets):
    k = len(words_seq)
    if variety.kind == "Free":
        return stallings.is_primitive_free(words_seq, rank,
                                           node_budget=budgets["node_budget"])
    if variety.kind == "Abelian":
        return abelian.is_primitive_abelian(abelian.abelianize(words_seq, rank),
                                            variety.n)
    if variety.kind == "Nilpotent":
        return nilpotent.is_primitive_nilpotent(words_seq, rank, variety.c,
                                                variety.n)
    if variety.kind == "AmAn":
        return laurent.is_primitive_am_an(words_seq, variety.m, variety.n,
                                          degree_bound=budgets["degree_bound"])
    if variety.kind == "Solvable":
        if k == rank:
            return solvable.is_basis_metabelian(words_seq, rank)
        return solvable.is_primitive_metabelian_subset(
            words_seq, rank, degree_bound=budgets["degree_bound"])
    raise ValueError("unknown variety")


def _solvable_trial(report, words_l, auto_l, rank, l):
    """Metabelian basis case: verify the full block-structure report at the
    ambient rank and the determinant criterion at rank l."""
    extended = extend_automorphism(auto_l, rank)
    tuple_r = [change_rank(w, rank) for w in words_l]
    tuple_r.append(generator_word(rank, rank))
    _, p_matrix = solvable.metabelian_witness_from_automorphism(extended)
    block = solvable.verify_solvable_restriction(tuple_r, p_matrix, t=2)
    small = solvable.is_basis_metabelian(list(words_l), l)
    return block.all_passed and small.is_primitive, {
        "report": block.to_json(),
        "restricted": small.status.value,
    }


def fuzz_restriction(variety, rank, l, k, trials, seed, budgets=None):
    """Run the restriction fuzzer; see the module docstring."""
    budgets = dict(budgets or {})
    budgets.setdefault("node_budget", stallings.DEFAULT_NODE_BUDGET)
    budgets.setdefault("degree_bound", 2)
    budgets.setdefault("max_steps", DEFAULT_MAX_STEPS)
    check_fuzz_regime(variety, rank, l, k)
    report = FuzzReport(variety=variety, rank=rank, l=l, k=k, trials=trials,
                        seed=seed)
    rng = random.Random(seed)
    for trial in range(trials):
        trial_seed = rng.getrandbits(63)
        steps = rng.randint(0, budgets["max_steps"])
        auto_l = random_automorphism(l, steps, trial_seed)
        words_l = tuple(auto_l.forward.images[:k])
        reproducer = {
            "trial": trial,
            "seed": trial_seed,
            "steps": steps,
            "set": [format_word(w) for w in words_l],
            "variety": variety.to_json(),
            "rank": rank,
            "l": l,
        }
        if variety.kind == "Solvable":
            try:
                ok, detail = _solvable_trial(report, words_l, auto_l, rank, l)
            except solvable.InvalidWitnessError as exc:
                ok, detail = False, {"error": str(exc)}
            if ok:
                report.passes += 1
            else:
                reproducer["detail"] = detail
                report.failures.append(reproducer)
            continue
        words_r = [change_rank(w, rank) for w in words_l]
        ambient = _decide(variety, words_r, rank, budgets)
        restricted = _decide(variety, list(words_l), l, budgets)
        if ambient.is_not_primitive or restricted.is_not_primitive:
            reproducer["ambient"] = ambient.to_json()
            reproducer["restricted"] = restricted.to_json()
            report.failures.append(reproducer)
        elif ambient.is_unknown or restricted.is_unknown:
            report.unknowns += 1
        else:
            report.passes += 1
    return report
