"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the registry of our eviction policies.

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

from typing import Dict, Type

from edge_cache.spaarc.exceptions import ParameterError
from edge_cache.spaarc.policy.base import EvictionPolicyBase
from edge_cache.spaarc.policy.fifo import FIFOPolicy
from edge_cache.spaarc.policy.lfu import LFUPolicy
from edge_cache.spaarc.policy.lru import LRUPolicy
from edge_cache.spaarc.policy.pop import POPPolicy

POLICIES: Dict[str, Type[EvictionPolicyBase]] = {
    x.name: x for x in (FIFOPolicy, LRUPolicy, LFUPolicy, POPPolicy)
}


def normalize_policy_name(name: str) -> str:
    """
    Provides the canonical name of a policy.

    :raise ParameterError:
        When the policy is unknown.
    """

    canonical = str(name).strip().upper()

    if canonical not in POLICIES:
        raise ParameterError(
            f"Unknown eviction policy {name!r}. Expected one of "
            f"{', '.join(POLICIES)}.",
            key="policy",
        )

    return canonical


def get_policy(name: str) -> EvictionPolicyBase:
    """
    Provides a fresh instance of the policy with the given name.
    """

    return POLICIES[normalize_policy_name(name)]()
