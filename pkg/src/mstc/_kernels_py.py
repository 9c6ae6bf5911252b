"""Pure-Python kernels. Same signatures and results as ``_kernels.pyx``.

Arrays are indexed by edge id.  ``order`` lists edge ids sorted by
``(cost, id)``.  ``status`` holds 0 (free), 1 (forced in) or 2 (forced out).
"""

FREE = 0
FORCED_IN = 1
FORCED_OUT = 2


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def kruskal(n, eu, ev, order, status):
    """Constrained Kruskal; returns chosen edge ids or ``None``."""
    eu = eu.tolist() if hasattr(eu, "tolist") else eu
    ev = ev.tolist() if hasattr(ev, "tolist") else ev
    order = order.tolist() if hasattr(order, "tolist") else order
    status = status.tolist() if hasattr(status, "tolist") else status
    parent = list(range(n))
    chosen = []
    need = n - 1
    for e in order:
        if status[e] != FORCED_IN:
            continue
        a = _find(parent, eu[e])
        b = _find(parent, ev[e])
        if a == b:
            return None
        parent[b] = a
        chosen.append(e)
    for e in order:
        if len(chosen) == need:
            break
        if status[e] != FREE:
            continue
        a = _find(parent, eu[e])
        b = _find(parent, ev[e])
        if a != b:
            parent[b] = a
            chosen.append(e)
    if len(chosen) != need:
        return None
    return chosen


def greedy_kruskal(n, eu, ev, order, adj_ptr, adj_idx):
    """Kruskal that skips edges conflicting with an already chosen edge."""
    eu = eu.tolist() if hasattr(eu, "tolist") else eu
    ev = ev.tolist() if hasattr(ev, "tolist") else ev
    order = order.tolist() if hasattr(order, "tolist") else order
    adj_ptr = adj_ptr.tolist() if hasattr(adj_ptr, "tolist") else adj_ptr
    adj_idx = adj_idx.tolist() if hasattr(adj_idx, "tolist") else adj_idx
    parent = list(range(n))
    blocked = [False] * len(eu)
    chosen = []
    need = n - 1
    for e in order:
        if len(chosen) == need:
            break
        if blocked[e]:
            continue
        a = _find(parent, eu[e])
        b = _find(parent, ev[e])
        if a == b:
            continue
        parent[b] = a
        chosen.append(e)
        for k in range(adj_ptr[e], adj_ptr[e + 1]):
            blocked[adj_idx[k]] = True
    if len(chosen) != need:
        return None
    return chosen


def violated_pairs(m, tree_ids, pair_a, pair_b):
    """Indices of conflict pairs with both members in ``tree_ids``."""
    in_tree = [False] * m
    for e in tree_ids:
        in_tree[e] = True
    pair_a = pair_a.tolist() if hasattr(pair_a, "tolist") else pair_a
    pair_b = pair_b.tolist() if hasattr(pair_b, "tolist") else pair_b
    return [k for k, (a, b) in enumerate(zip(pair_a, pair_b)) if in_tree[a] and in_tree[b]]
