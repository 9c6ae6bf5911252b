"""SplitMix64 generator with derived streams.

Instance files must be reproducible across numpy releases and across
implementations, so the generator is pinned here rather than delegated to a
library whose streams may change.

* ``next()``: standard SplitMix64 (Steele, Lea, Flood 2014).
* ``below(k)``: uniform in ``[0, k)`` by rejection of the biased tail, then modulo.
* ``stream(seed, k)``: a fresh generator whose state is the ``k``-th output
  (0-based) of ``SplitMix64(seed)``.  Streams with different ``k`` are
  independent, so drawing more from one never shifts another.
"""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK

    @classmethod
    def stream(cls, seed: int, k: int) -> "SplitMix64":
        master = cls(seed)
        for _ in range(k):
            master.next()
        return cls(master.next())

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` inclusive."""
        return lo + self.below(hi - lo + 1)

    def sample_indices(self, population: int, k: int) -> list[int]:
        """``k`` distinct indices from ``range(population)`` (Floyd's algorithm), ascending."""
        if not 0 <= k <= population:
            raise ValueError(f"cannot sample {k} from {population}")
        chosen = set()
        for j in range(population - k, population):
            t = self.below(j + 1)
            chosen.add(j if t in chosen else t)
        return sorted(chosen)
