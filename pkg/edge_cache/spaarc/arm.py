"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the association rule mining engine.

License:
::

    MIT License

    Copyright (c) 2025, 2026 SPAARC Simulator Contributors

    Permission is hereby granted, free of charge, to any person obtaining a copy
    of this software and associated documentation files (the "Software"), to deal
    in the Software without restriction, including without limitation the rights
    to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
    copies of the Software, and to permit persons to whom the Software is
    furnished to do so, subject to the following conditions:

    The above copyright notice and this permission notice shall be included in all
    copies or substantial portions of the Software.

    THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
    IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
    FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
    AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
    LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
    OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
    SOFTWARE.
"""

import logging
import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import pandas
from mlxtend.frequent_patterns import apriori, fpgrowth
from mlxtend.preprocessing import TransactionEncoder

from edge_cache.spaarc.defaults.simulation import (
    ARM_ALGORITHMS,
    DEFAULT_MAX_ITEMSET_SIZE,
)
from edge_cache.spaarc.domain import Transaction
from edge_cache.spaarc.exceptions import ParameterError

# The miners are queried slightly below the threshold, the exact threshold is
# then applied on the counts they report.
MINING_SLACK: float = 1e-9


@dataclass(frozen=True)
class FrequentItemset:
    """
    Describes an itemset and the fraction of transactions containing it.
    """

    items: FrozenSet[int]
    support: float

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """
        Provides the key of the canonical order: size, then item ids.
        """

        return len(self.items), tuple(sorted(self.items))


@dataclass(frozen=True)
class AssociationRule:
    """
    Describes a rule :code:`antecedent => consequent`.
    """

    antecedent: FrozenSet[int]
    consequent: FrozenSet[int]
    support: float
    confidence: float
    lift: float

    @property
    def items(self) -> FrozenSet[int]:
        """
        Provides all items of the rule.
        """

        return self.antecedent | self.consequent

    @property
    def sort_key(self) -> Tuple:
        """
        Provides the key of the canonical order of rules.
        """

        return (
            len(self.items),
            tuple(sorted(self.items)),
            len(self.antecedent),
            tuple(sorted(self.antecedent)),
        )


@dataclass(frozen=True)
class RuleSet:
    """
    Describes the rules generated at one (min support, min confidence) point.
    """

    rules: Tuple[AssociationRule, ...]
    min_support: float
    min_confidence: float
    generated_from: int
    _index: Dict[int, Tuple[int, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))

        index: Dict[int, List[int]] = {}

        for position, rule in enumerate(self.rules):
            # An antecedent is contained in a context only if its smallest item
            # is, so each rule is indexed once.
            index.setdefault(min(rule.antecedent), []).append(position)

        object.__setattr__(
            self, "_index", {key: tuple(value) for key, value in index.items()}
        )

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[AssociationRule]:
        return iter(self.rules)

    def candidates_for(self, context: Iterable[int]) -> Iterator[AssociationRule]:
        """
        Provides the rules which may have their antecedent in the given context.
        """

        for item in sorted(set(context)):
            for position in self._index.get(item, ()):
                yield self.rules[position]


def _check_threshold(value: float, key: str) -> None:
    if not 0 < value <= 1:
        raise ParameterError(f"{key} must be in (0, 1], got {value!r}.", key=key)


def gen_frequent_itemsets(
    transactions: Sequence[Transaction],
    min_support: float,
    *,
    max_len: Optional[int] = DEFAULT_MAX_ITEMSET_SIZE,
    algorithm: str = "apriori",
) -> List[FrequentItemset]:
    """
    Provides the itemsets whose support reaches the given minimum support.

    :param transactions:
        The transactions to mine.
    :param min_support:
        The minimum support, in :code:`(0, 1]`.
    :param max_len:
        The maximum size of the itemsets. :code:`None` for no limit.
    :param algorithm:
        The mining algorithm: :code:`apriori` or :code:`fpgrowth`. Both give the
        same result.

    :raise ParameterError:
        When the support is out of range, the transactions are missing or the
        algorithm is unknown.
    """

    _check_threshold(min_support, "min_support")

    if algorithm not in ARM_ALGORITHMS:
        raise ParameterError(f"Unknown algorithm {algorithm!r}.", key="algorithm")

    if not transactions:
        raise ParameterError("Nothing to mine.", key="transactions")

    dataset = [sorted(x.items) for x in transactions]

    encoder = TransactionEncoder()
    matrix = encoder.fit(dataset).transform(dataset)
    frame = pandas.DataFrame(matrix, columns=encoder.columns_)

    miner = apriori if algorithm == "apriori" else fpgrowth
    found = miner(
        frame,
        min_support=min_support * (1 - MINING_SLACK),
        use_colnames=True,
        max_len=max_len,
    )

    total = len(transactions)
    result = []

    for support, itemset in zip(found["support"], found["itemsets"]):
        # Supports are re-derived from integer counts so both miners agree.
        count = int(round(float(support) * total))
        exact = count / total

        if exact >= min_support:
            result.append(
                FrequentItemset(
                    items=frozenset(int(x) for x in itemset), support=exact
                )
            )

    result.sort(key=lambda x: x.sort_key)

    logging.debug(
        "Mined %d frequent itemsets out of %d transactions at support %r.",
        len(result),
        total,
        min_support,
    )

    return result


def gen_rules(
    itemsets: Sequence[FrequentItemset], min_confidence: float
) -> List[AssociationRule]:
    """
    Provides every rule of every frequent itemset whose confidence reaches the
    given minimum confidence.

    :raise ParameterError:
        When the confidence is out of range, or when the itemsets are not
        closed under subset.
    """

    _check_threshold(min_confidence, "min_confidence")

    supports = {x.items: x.support for x in itemsets}
    rules = []

    for itemset in sorted(itemsets, key=lambda x: x.sort_key):
        items = sorted(itemset.items)

        for size in range(1, len(items)):
            for antecedent in combinations(items, size):
                antecedent = frozenset(antecedent)
                consequent = itemset.items - antecedent

                try:
                    support_a = supports[antecedent]
                    support_b = supports[consequent]
                except KeyError:
                    raise ParameterError(
                        "Itemsets are not closed under subset.", key="itemsets"
                    ) from None

                confidence = itemset.support / support_a

                if confidence < min_confidence:
                    continue

                rules.append(
                    AssociationRule(
                        antecedent=antecedent,
                        consequent=consequent,
                        support=itemset.support,
                        confidence=confidence,
                        lift=itemset.support / (support_a * support_b),
                    )
                )

    return rules


def filter_lift(rules: Iterable[AssociationRule]) -> List[AssociationRule]:
    """
    Keeps the rules whose lift is at least 1.
    """

    return [x for x in rules if x.lift >= 1]


def match_rules(
    ruleset: Optional[RuleSet], context: Iterable[int]
) -> List[Tuple[int, AssociationRule]]:
    """
    Provides the objects suggested by the rules whose antecedent is contained
    in the given context.

    Each object comes with the highest-lift rule suggesting it. The result is
    ordered by descending lift, then by id.
    """

    context = frozenset(context)

    if ruleset is None or not context:
        return []

    best: Dict[int, AssociationRule] = {}

    for rule in ruleset.candidates_for(context):
        if not rule.antecedent <= context:
            continue

        for item in rule.consequent - context:
            current = best.get(item)

            if current is None or rule.lift > current.lift:
                best[item] = rule

    return sorted(best.items(), key=lambda x: (-x[1].lift, x[0]))


def build_ruleset(
    transactions: Sequence[Transaction],
    min_support: float,
    min_confidence: float,
    *,
    max_len: Optional[int] = DEFAULT_MAX_ITEMSET_SIZE,
    algorithm: str = "apriori",
) -> RuleSet:
    """
    Mines the given transactions into a ruleset.
    """

    _check_threshold(min_confidence, "min_confidence")

    itemsets = gen_frequent_itemsets(
        transactions, min_support, max_len=max_len, algorithm=algorithm
    )
    rules = filter_lift(gen_rules(itemsets, min_confidence))

    return RuleSet(
        rules=tuple(rules),
        min_support=min_support,
        min_confidence=min_confidence,
        generated_from=len(transactions),
    )


class RuleSetHolder:
    """
    Provides a swappable reference to the active ruleset.

    :param ruleset:
        The initial ruleset.
    """

    def __init__(self, ruleset: Optional[RuleSet] = None) -> None:
        self._lock = threading.Lock()
        self._ruleset = ruleset

    def get(self) -> Optional[RuleSet]:
        """
        Provides the active ruleset.
        """

        with self._lock:
            return self._ruleset

    def set(self, ruleset: Optional[RuleSet]) -> "RuleSetHolder":
        """
        Installs a new ruleset.
        """

        with self._lock:
            self._ruleset = ruleset

        return self
