"""Pure-Python search kernel: all valid forests with omitted host 0.

This mirrors the compiled kernel in ``_speedups.pyx``; the enumerator picks
whichever is importable.  Results are raw ``(parent, hosts)`` pairs where
``parent`` uses -1 for "outermost" and ``hosts`` lists pole hosts ascending;
the omitted host is always ring 0, which fixes one representative per
rotation orbit because a rotation moves the omitted host.

Search order: pick the ancestor chain of ring 0 (the rings surrounding the
omitted cluster), which forces the set of pole-surrounding rings to be the
predecessors of that chain; then backtrack over the remaining parent
entries.  Pole-surrounding rings must form parent-closed, non-branching
chains (one pole per maximal tree), which prunes most of the space; the
forward-transport law is checked at the leaves with ancestor bitmasks.
"""

from itertools import permutations

NONE = -1
UNSET = -2


def enumerate_forests(p):
    """Sorted list of (parent, hosts) for every valid configuration with omitted host 0."""
    if p < 3:
        raise ValueError("period must be at least 3")
    results = []
    # Ring 1 can never surround the omitted cluster: ring 0 would then have
    # to surround a pole, contradicting that it is the innermost surrounder.
    candidates = range(2, p)
    for size in range(1, p - 1):
        for chain in permutations(candidates, size):
            _search_chain(p, chain, results)
    results.sort()
    return results


def _search_chain(p, chain, results):
    full = (1 << p) - 1
    parent = [UNSET] * p
    prev = 0
    for ring in chain:
        parent[prev] = ring
        prev = ring
    parent[prev] = NONE

    s_mask = 1
    for ring in chain:
        s_mask |= 1 << ring
    pole_rings = sorted(((ring - 1) % p) for ring in _bits(s_mask, p))
    p_mask = 0
    for ring in pole_rings:
        p_mask |= 1 << ring
    size_p = len(pole_rings)

    # Forced parents must already respect pole-chain closure.
    pchild = [0] * p
    pedges = 0
    for ring in pole_rings:
        pa = parent[ring]
        if pa == UNSET or pa == NONE:
            continue
        if not (p_mask >> pa) & 1:
            return
        pchild[pa] += 1
        pedges += 1
    if pedges > size_p - 2:
        return

    assigned = 1
    for ring in chain:
        assigned |= 1 << ring
    rest = [x for x in range(p) if not (assigned >> x) & 1]
    order = ([x for x in rest if (p_mask >> x) & 1]
             + [x for x in rest if not (p_mask >> x) & 1])

    def reaches(start, target):
        cur = start
        while cur >= 0:
            if cur == target:
                return True
            cur = parent[cur]
        return False

    def leaf():
        anc = [0] * p
        for i in range(p):
            mask = 0
            cur = parent[i]
            while cur != NONE:
                mask |= 1 << cur
                cur = parent[cur]
            anc[i] = mask
        outside = full & ~p_mask
        for b in range(p):
            mask = anc[b] & outside
            if not mask:
                continue
            shifted = ((mask << 1) | (mask >> (p - 1))) & full
            if shifted & ~anc[(b + 1) % p] & full:
                return
        hosts = tuple(x for x in pole_rings if pchild[x] == 0)
        results.append((tuple(parent), hosts))

    def rec(idx, pedges):
        if idx == len(order):
            leaf()
            return
        x = order[idx]
        parent[x] = NONE
        rec(idx + 1, pedges)
        if (p_mask >> x) & 1:
            if pedges < size_p - 2:
                for pa in pole_rings:
                    if pa == x or pchild[pa] or reaches(pa, x):
                        continue
                    parent[x] = pa
                    pchild[pa] += 1
                    rec(idx + 1, pedges + 1)
                    pchild[pa] -= 1
        else:
            for pa in range(p):
                if pa == x or reaches(pa, x):
                    continue
                parent[x] = pa
                rec(idx + 1, pedges)
        parent[x] = UNSET

    rec(0, pedges)


def _bits(mask, p):
    return [i for i in range(p) if (mask >> i) & 1]
