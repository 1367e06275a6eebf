import random
from typing import List


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> List[List[int]]:
    """
    Product of elementary integer row operations and sign flips.
    """
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n == 0:
        return M
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            q = rng.randint(-2, 2)
            M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        elif rng.random() < 0.3:
            M[i] = [-a for a in M[i]]
    return M
