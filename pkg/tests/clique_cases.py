"""Random partial results for checking maximal mergings against brute force."""

import random

from temporal_anchor.model import TemporalUnit, TimePoint, merge
from temporal_anchor.rules import PartialResult

_FIELDS = {"month": [8, 9], "date": [1, 2, 3], "day_of_week": [0, 1], "hour": [2, 3, 4],
           "time_of_day": ["morning", "afternoon"]}


def random_tu(rng):
    start = {f: rng.choice(v) for f, v in _FIELDS.items() if rng.random() < 0.3}
    end = {f: rng.choice(v) for f, v in _FIELDS.items() if rng.random() < 0.1}
    return TemporalUnit(start=TimePoint(**start), end=TimePoint(**end))


def random_partials(rng, n):
    out = []
    for _ in range(n):
        arity = 1 if rng.random() < 0.8 else 2
        tus = tuple(random_tu(rng) for _ in range(arity))
        out.append(PartialResult("A1", rng.random(), tus, None, 0.8, rng.randrange(2)))
    return out


def compatible(a, b):
    return (a.arity == b.arity and a.tu_index == b.tu_index
            and all(merge(x, y) is not None for x, y in zip(a.tus, b.tus)))


def instances(count, seed, max_n=12):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_partials(rng, rng.randrange(1, max_n + 1)), rng
