import copy
import json
import random

from hrng.transcript import chain_digest


def reseal(records):
    """Recompute the digest chain after an edit (models a forger who rewrites the whole file)."""
    prev = ""
    for rec in records:
        body = {k: v for k, v in rec.items() if k != "digest"}
        rec["digest"] = chain_digest(prev, body)
        prev = rec["digest"]
    return records


def leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from leaves(v, path + (k,))
    elif isinstance(obj, list) and obj:
        for i, v in enumerate(obj):
            yield from leaves(v, path + (i,))
    else:
        yield path, obj


def mutate_value(v, rng):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + rng.choice([-1, 1, 2])
    if isinstance(v, str):
        if v == "":
            return "0"
        i = rng.randrange(len(v))
        ch = v[i]
        if ch in "01" and set(v) <= {"0", "1"}:
            new = "1" if ch == "0" else "0"
        elif ch.isdigit():
            new = str((int(ch) + rng.randint(1, 9)) % 10)
        elif ch in "abcdef":
            new = "0123456789abcdef"[("0123456789abcdef".index(ch) + rng.randint(1, 15)) % 16]
        else:
            new = chr(ord(ch) ^ 1)
        return v[:i] + new + v[i + 1:]
    if isinstance(v, list):
        return [0]
    if v is None:
        return 0
    return v


def set_path(obj, path, value):
    for p in path[:-1]:
        obj = obj[p]
    obj[path[-1]] = value


def mutate(records, rng, *, kinds=None, only=None, skip=()):
    """Copy ``records`` with exactly one leaf changed. Returns (mutated, description)."""
    out = copy.deepcopy(records)
    while True:
        i = rng.randrange(len(out)) if only is None else only
        if kinds is not None and out[i]["kind"] not in kinds:
            continue
        paths = [(p, v) for p, v in leaves(out[i]) if not any(s in p for s in skip)]
        if not paths:
            continue
        path, old = rng.choice(paths)
        new = mutate_value(old, rng)
        if new == old or json.dumps(new) == json.dumps(old):
            continue
        set_path(out[i], path, new)
        return out, (i, path)
