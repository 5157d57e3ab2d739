"""Association rule generation, the five rule metrics, and top-k ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .apriori import Itemset, SupportTable


@dataclass(frozen=True)
class AssociationRule:
    """Antecedent -> consequent with its five metrics.

    ``support`` is the joint support of antecedent and consequent together;
    ``conviction`` is ``math.inf`` when confidence is 1 and the consequent is
    not in every transaction.
    """

    antecedent: Itemset
    consequent: Itemset
    support: float
    confidence: float
    lift: float
    leverage: float
    conviction: float

    def __post_init__(self) -> None:
        if not self.antecedent or not self.consequent:
            raise ValueError("antecedent and consequent must be non-empty")
        if set(self.antecedent) & set(self.consequent):
            raise ValueError("antecedent and consequent must be disjoint")


@dataclass(frozen=True)
class RankingPolicy:
    """Selection and ordering convention for reported rules.

    Rules are first selected as the ``top_k`` of highest confidence, then the
    selection is re-sorted by descending lift. Only those two keys are
    supported; they are fields so a report can state its convention.
    """

    min_confidence: float = 0.25
    top_k: int = 30
    selection_key: str = "confidence"
    sort_key: str = "lift"

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence {self.min_confidence} outside [0, 1]")
        if self.top_k < 1:
            raise ValueError(f"top_k {self.top_k} below 1")
        if self.selection_key != "confidence" or self.sort_key != "lift":
            raise ValueError("only confidence-selection with lift-ordering is supported")


def confidence(supp_xy: float, supp_x: float) -> float:
    """Joint support over antecedent support."""
    if supp_x <= 0.0:
        raise ValueError("confidence undefined for zero antecedent support")
    return supp_xy / supp_x


def lift(conf: float, supp_y: float) -> float:
    """Confidence over consequent support; 1 means independence."""
    if supp_y <= 0.0:
        raise ValueError("lift undefined for zero consequent support")
    return conf / supp_y


def leverage(supp_xy: float, supp_x: float, supp_y: float) -> float:
    """Observed joint support minus the value expected under independence."""
    return supp_xy - supp_x * supp_y


def conviction(supp_y: float, conf: float) -> float:
    """(1 - supp_y) / (1 - confidence), with the confidence-1 singularity mapped
    to +inf (or to 1.0 when the consequent is itself universal)."""
    if conf == 1.0:
        return 1.0 if supp_y == 1.0 else math.inf
    return (1.0 - supp_y) / (1.0 - conf)


def rule_metrics(supp_xy: float, supp_x: float, supp_y: float) -> tuple[float, float, float, float]:
    """(confidence, lift, leverage, conviction) for one antecedent/consequent split.

    Lift is computed in the symmetric form supp_xy / (supp_x * supp_y), which
    equals confidence / supp_y algebraically but is exactly equal under
    antecedent/consequent swap, matching the symmetry the metric promises.
    """
    conf = confidence(supp_xy, supp_x)
    if supp_y <= 0.0:
        raise ValueError("lift undefined for zero consequent support")
    return (
        conf,
        supp_xy / (supp_x * supp_y),
        leverage(supp_xy, supp_x, supp_y),
        conviction(supp_y, conf),
    )


def generate_rules(table: SupportTable, min_confidence: float = 0.25) -> list[AssociationRule]:
    """Evaluate every antecedent/consequent split of every frequent itemset.

    For each frequent itemset of size >= 2, every non-empty proper subset is
    tried as antecedent with the remainder as consequent. Rules whose
    confidence reaches ``min_confidence`` are returned with all five metrics.

    Raises:
        LookupError: a needed subset is missing from the table, which the
            miner's downward closure makes impossible for well-formed input.
    """
    n = table.n_transactions
    out: list[AssociationRule] = []
    for itemset in sorted(table.counts):
        if len(itemset) < 2:
            continue
        supp_xy = table.counts[itemset] / n
        for size in range(1, len(itemset)):
            for antecedent in combinations(itemset, size):
                consequent = tuple(i for i in itemset if i not in antecedent)
                count_x = table.counts.get(antecedent)
                count_y = table.counts.get(consequent)
                if count_x is None or count_y is None:
                    missing = antecedent if count_x is None else consequent
                    raise LookupError(
                        f"support table lacks subset {missing} of {itemset}; "
                        "downward closure violated"
                    )
                conf, lift_value, lev, conv = rule_metrics(supp_xy, count_x / n, count_y / n)
                if conf < min_confidence:
                    continue
                out.append(
                    AssociationRule(
                        antecedent=antecedent,
                        consequent=consequent,
                        support=supp_xy,
                        confidence=conf,
                        lift=lift_value,
                        leverage=lev,
                        conviction=conv,
                    )
                )
    return out


def rank_rules(rules: Sequence[AssociationRule], policy: RankingPolicy | None = None) -> list[AssociationRule]:
    """Select the top_k rules by confidence, then order them by lift.

    Both steps break ties the same way: the other metric first, then
    lexicographic antecedent and consequent. Item ids are assigned in
    name order, so id-tuple comparison is name comparison. The combined key is
    total, making the output independent of input order.
    """
    if policy is None:
        policy = RankingPolicy()
    selected = sorted(
        rules,
        key=lambda r: (-r.confidence, -r.lift, r.antecedent, r.consequent),
    )[: policy.top_k]
    selected.sort(key=lambda r: (-r.lift, -r.confidence, r.antecedent, r.consequent))
    return selected
