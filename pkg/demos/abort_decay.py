"""How often the protocol aborts as the block length grows.

Each size check compares a binomial count with its mean minus a slack of
delta times the block length, so the abort probability falls off quickly
once n delta^2 is large.
"""

from pdt.audit import monte_carlo_stats
from pdt.rates import ProtocolParams

if __name__ == "__main__":
    print("      n  trials  abort rate  aborts by stage")
    for n in (1_000, 3_000, 10_000, 30_000, 100_000):
        stats = monte_carlo_stats(ProtocolParams(n, 2, 0.5, 0.5, 0.02), 200, seed=5)
        print(f"{n:7d}  {stats.trials:6d}  {stats.abort_rate:10.3f}  {stats.abort_by_stage}")
