# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the branch-and-bound hot loop.

Mirrors ``_kernels_py`` exactly; see that module for the array conventions.
"""
from cpython.mem cimport PyMem_Malloc, PyMem_Free

ctypedef long long i64
ctypedef unsigned char u8


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept nogil:
    cdef Py_ssize_t root = x
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


cdef Py_ssize_t* _new_forest(Py_ssize_t n) except NULL:
    cdef Py_ssize_t* parent = <Py_ssize_t*> PyMem_Malloc(max(n, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i
    if parent == NULL:
        raise MemoryError()
    for i in range(n):
        parent[i] = i
    return parent


def kruskal(Py_ssize_t n, const i64[:] eu, const i64[:] ev, const i64[:] order, const u8[:] status):
    cdef Py_ssize_t need = n - 1
    cdef Py_ssize_t m = order.shape[0]
    cdef Py_ssize_t i, e, a, b
    cdef list chosen = []
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t* parent = _new_forest(n)
    try:
        for i in range(m):
            e = order[i]
            if status[e] != 1:
                continue
            a = _find(parent, eu[e])
            b = _find(parent, ev[e])
            if a == b:
                return None
            parent[b] = a
            chosen.append(e)
            count += 1
        for i in range(m):
            if count == need:
                break
            e = order[i]
            if status[e] != 0:
                continue
            a = _find(parent, eu[e])
            b = _find(parent, ev[e])
            if a != b:
                parent[b] = a
                chosen.append(e)
                count += 1
    finally:
        PyMem_Free(parent)
    if count != need:
        return None
    return chosen


def greedy_kruskal(Py_ssize_t n, const i64[:] eu, const i64[:] ev, const i64[:] order,
                   const i64[:] adj_ptr, const i64[:] adj_idx):
    cdef Py_ssize_t need = n - 1
    cdef Py_ssize_t m = order.shape[0]
    cdef Py_ssize_t i, k, e, a, b
    cdef Py_ssize_t count = 0
    cdef list chosen = []
    cdef Py_ssize_t* parent = _new_forest(n)
    cdef u8* blocked = <u8*> PyMem_Malloc(max(m, 1) * sizeof(u8))
    if blocked == NULL:
        PyMem_Free(parent)
        raise MemoryError()
    try:
        for i in range(m):
            blocked[i] = 0
        for i in range(m):
            if count == need:
                break
            e = order[i]
            if blocked[e]:
                continue
            a = _find(parent, eu[e])
            b = _find(parent, ev[e])
            if a == b:
                continue
            parent[b] = a
            chosen.append(e)
            count += 1
            for k in range(adj_ptr[e], adj_ptr[e + 1]):
                blocked[adj_idx[k]] = 1
    finally:
        PyMem_Free(parent)
        PyMem_Free(blocked)
    if count != need:
        return None
    return chosen


def violated_pairs(Py_ssize_t m, tree_ids, const i64[:] pair_a, const i64[:] pair_b):
    cdef Py_ssize_t k
    cdef Py_ssize_t npairs = pair_a.shape[0]
    cdef list out = []
    cdef u8* in_tree = <u8*> PyMem_Malloc(max(m, 1) * sizeof(u8))
    if in_tree == NULL:
        raise MemoryError()
    try:
        for k in range(m):
            in_tree[k] = 0
        for e in tree_ids:
            in_tree[<Py_ssize_t> e] = 1
        for k in range(npairs):
            if in_tree[pair_a[k]] and in_tree[pair_b[k]]:
                out.append(k)
    finally:
        PyMem_Free(in_tree)
    return out
