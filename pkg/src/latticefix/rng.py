"""Reproducible 64-bit pseudo-random stream.

The generator is xorshift64* (Vigna 2016) so that the same seed gives the
same stream in any language:

    x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27     (mod 2**64)
    output = x * 0x2545F4914F6CDD1D                  (mod 2**64)

The initial state is ``splitmix64(seed)`` (replaced by the golden-ratio
constant in the impossible case that it is zero).  Per-trial sub-seeds are
``splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)``.

Bounded integers use rejection sampling on the full 64-bit output: draw
``r`` until ``r < 2**64 - (2**64 % n)`` and return ``r % n``.
"""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MULTIPLIER = 0x2545F4914F6CDD1D
DEFAULT_SEED = 20240917


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def trial_seed(master: int, index: int) -> int:
    return splitmix64((master + (index + 1) * GOLDEN) & MASK)


class XorShift64Star:
    def __init__(self, seed: int = DEFAULT_SEED):
        if not 0 <= seed <= MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.state = splitmix64(seed) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * MULTIPLIER) & MASK

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        # Fisher-Yates, high index down
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq, k: int) -> list:
        pool = list(seq)
        self.shuffle(pool)
        return pool[:k]
