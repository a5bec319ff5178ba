import random

from rankfilt.linalg import dense_rank_fractions, sparse_rank


def test_known_ranks():
    assert sparse_rank([]) == 0
    assert sparse_rank([{}]) == 0
    assert sparse_rank([{0: 5}]) == 1
    assert sparse_rank([{0: 1, 1: 2}, {0: 2, 1: 4}]) == 1
    assert sparse_rank([{0: 1}, {1: 1}, {0: 1, 1: 1}]) == 2
    # integer-sensitive case: entries that cancel only over Q
    assert sparse_rank([{0: 2, 1: 6}, {0: 3, 1: 9}]) == 1


def test_random_cross_check():
    rng = random.Random(20260810)
    for _ in range(500):
        nr, nc = rng.randint(1, 9), rng.randint(1, 9)
        rows = []
        for _ in range(nr):
            row = {}
            for c in range(nc):
                if rng.random() < 0.45:
                    v = rng.randint(-4, 4)
                    if v:
                        row[c] = v
            rows.append(row)
        expected = dense_rank_fractions(rows, nc)
        assert sparse_rank([dict(r) for r in rows]) == expected


def test_rank_scaling_invariance():
    rng = random.Random(12)
    for _ in range(100):
        nc = rng.randint(1, 6)
        rows = [
            {c: rng.randint(-3, 3) for c in range(nc) if rng.random() < 0.6}
            for _ in range(rng.randint(1, 6))
        ]
        rows = [{c: v for c, v in r.items() if v} for r in rows]
        scaled = [{c: 7 * v for c, v in r.items()} for r in rows]
        assert sparse_rank([dict(r) for r in rows]) == sparse_rank(scaled)
