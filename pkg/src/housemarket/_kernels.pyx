# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C-typed kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, calloc, free

INF_COST = 1 << 60

cdef long long C_INF = 1LL << 60


cdef int* _ints(object seq, Py_ssize_t n) except NULL:
    cdef int* out = <int*>malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t i
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        out[i] = seq[i]
    return out


def functional_cycles(succ):
    cdef Py_ssize_t n = len(succ)
    cdef int* nxt = _ints(succ, n)
    cdef char* state = <char*>calloc(n + 1, 1)
    cdef int* path = <int*>malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t start, plen, k, i, lo
    cdef int v
    cycles = []
    try:
        for start in range(n):
            if state[start]:
                continue
            plen = 0
            v = <int>start
            while state[v] == 0:
                state[v] = 1
                path[plen] = v
                plen += 1
                v = nxt[v]
            if state[v] == 1:
                k = 0
                while path[k] != v:
                    k += 1
                lo = k
                for i in range(k, plen):
                    if path[i] < path[lo]:
                        lo = i
                cyc = [path[i] for i in range(lo, plen)]
                cyc.extend([path[i] for i in range(k, lo)])
                cycles.append(cyc)
            for i in range(plen):
                state[path[i]] = 2
    finally:
        free(nxt)
        free(state)
        free(path)
    cycles.sort()
    return cycles


def ttc(prefs, endowment):
    cdef Py_ssize_t n = len(prefs)
    cdef Py_ssize_t a, i, k, lo, plen, nalive
    cdef int v, p, stamp, remaining
    cdef int* holder = <int*>malloc((n + 1) * sizeof(int))
    cdef char* removed = <char*>calloc(n + 1, 1)
    cdef char* assigned = <char*>calloc(n + 1, 1)
    cdef int* ptr = <int*>calloc(n + 1, sizeof(int))
    cdef int* succ = <int*>malloc((n + 1) * sizeof(int))
    cdef int* mark = <int*>calloc(n + 1, sizeof(int))
    cdef int* path = <int*>malloc((n + 1) * sizeof(int))
    cdef int* alive = <int*>malloc((n + 1) * sizeof(int))
    cdef int* top = <int*>malloc((n + 1) * sizeof(int))
    house_of = [-1] * n
    stages = []
    try:
        for a in range(n):
            holder[<int>endowment[a]] = <int>a
        plists = [list(pl) for pl in prefs]
        remaining = <int>n
        while remaining:
            nalive = 0
            for a in range(n):
                if not assigned[a]:
                    alive[nalive] = <int>a
                    nalive += 1
            for i in range(nalive):
                a = alive[i]
                pl = plists[a]
                p = ptr[a]
                while removed[<int>pl[p]]:
                    p += 1
                ptr[a] = p
                top[a] = pl[p]
                succ[a] = holder[top[a]]
                mark[a] = 0
            stamp = len(stages) + 1
            cycles = []
            for i in range(nalive):
                if mark[alive[i]]:
                    continue
                plen = 0
                v = alive[i]
                while mark[v] == 0:
                    mark[v] = -stamp
                    path[plen] = v
                    plen += 1
                    v = succ[v]
                if mark[v] == -stamp:
                    k = 0
                    while path[k] != v:
                        k += 1
                    lo = k
                    for a in range(k, plen):
                        if path[a] < path[lo]:
                            lo = a
                    cyc = [path[a] for a in range(lo, plen)]
                    cyc.extend([path[a] for a in range(k, lo)])
                    cycles.append(cyc)
                for a in range(plen):
                    mark[path[a]] = stamp
            cycles.sort()
            for cyc in cycles:
                for v in cyc:
                    house_of[v] = top[v]
                    assigned[v] = 1
                    removed[top[v]] = 1
                    remaining -= 1
            stages.append(cycles)
    finally:
        free(holder); free(removed); free(assigned); free(ptr)
        free(succ); free(mark); free(path); free(alive); free(top)
    return house_of, stages


def hungarian(cost):
    cdef Py_ssize_t n = len(cost)
    if n == 0:
        return []
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef long long big = 1, c, cur, delta, ui0
    cdef long long* a = <long long*>malloc(n * n * sizeof(long long))
    cdef long long* u = <long long*>calloc(n + 1, sizeof(long long))
    cdef long long* v = <long long*>calloc(n + 1, sizeof(long long))
    cdef long long* minv = <long long*>malloc((n + 1) * sizeof(long long))
    cdef Py_ssize_t* p = <Py_ssize_t*>calloc(n + 1, sizeof(Py_ssize_t))
    cdef Py_ssize_t* way = <Py_ssize_t*>calloc(n + 1, sizeof(Py_ssize_t))
    cdef char* used = <char*>malloc(n + 1)
    try:
        for i in range(n):
            row = cost[i]
            for j in range(n):
                pc = row[j]
                if pc >= INF_COST:
                    a[i * n + j] = -1
                else:
                    c = pc
                    a[i * n + j] = c
                    if c + 1 > big:
                        big = c + 1
        big = big * (n + 1)
        for i in range(n * n):
            if a[i] < 0:
                a[i] = big
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for j in range(n + 1):
                minv[j] = C_INF
                used[j] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                ui0 = u[i0]
                delta = C_INF
                j1 = 0
                for j in range(1, n + 1):
                    if not used[j]:
                        cur = a[(i0 - 1) * n + j - 1] - ui0 - v[j]
                        if cur < minv[j]:
                            minv[j] = cur
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(n + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j1
                if p[j0] == 0:
                    break
            while True:
                j1 = way[j0]
                p[j0] = p[j1]
                j0 = j1
                if j0 == 0:
                    break
        assign = [0] * n
        for j in range(1, n + 1):
            assign[p[j] - 1] = j - 1
    finally:
        free(a); free(u); free(v); free(minv); free(p); free(way); free(used)
    for i in range(n):
        if cost[i][assign[i]] >= INF_COST:
            return None
    return assign


def hopcroft_karp(int n_left, int n_right, adj):
    cdef Py_ssize_t total = 0, i, e, head, tail
    cdef int k, j, unreached = n_left + n_right + 1, top, cur
    cdef bint found
    for i in range(n_left):
        total += len(adj[i])
    cdef int* start = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* nbr = <int*>malloc((total + 1) * sizeof(int))
    cdef int* match_l = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* match_r = <int*>malloc((n_right + 1) * sizeof(int))
    cdef int* dist = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* queue = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* stack = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* pos = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* via = <int*>malloc((n_left + 1) * sizeof(int))
    try:
        e = 0
        for i in range(n_left):
            start[i] = <int>e
            for j in adj[i]:
                nbr[e] = j
                e += 1
        start[n_left] = <int>e
        for i in range(n_left):
            match_l[i] = -1
        for i in range(n_right):
            match_r[i] = -1
        while True:
            head = 0
            tail = 0
            for i in range(n_left):
                if match_l[i] < 0:
                    dist[i] = 0
                    queue[tail] = <int>i
                    tail += 1
                else:
                    dist[i] = unreached
            found = False
            while head < tail:
                i = queue[head]
                head += 1
                for e in range(start[i], start[i + 1]):
                    k = match_r[nbr[e]]
                    if k < 0:
                        found = True
                    elif dist[k] == unreached:
                        dist[k] = dist[i] + 1
                        queue[tail] = k
                        tail += 1
            if not found:
                break
            for i in range(n_left):
                if match_l[i] >= 0:
                    continue
                top = 0
                stack[0] = <int>i
                pos[0] = start[i]
                while top >= 0:
                    cur = stack[top]
                    if pos[top] >= start[cur + 1]:
                        dist[cur] = unreached
                        top -= 1
                        continue
                    j = nbr[pos[top]]
                    pos[top] += 1
                    k = match_r[j]
                    if k < 0:
                        via[top] = j
                        while top >= 0:
                            match_l[stack[top]] = via[top]
                            match_r[via[top]] = stack[top]
                            top -= 1
                        break
                    if dist[k] == dist[cur] + 1:
                        via[top] = j
                        top += 1
                        stack[top] = k
                        pos[top] = start[k]
        result = [match_l[i] for i in range(n_left)]
    finally:
        free(start); free(nbr); free(match_l); free(match_r); free(dist)
        free(queue); free(stack); free(pos); free(via)
    return result


def greedy_lfmm(int n, edges):
    cdef Py_ssize_t m = len(edges), e, nalive, i, npicked
    cdef int* eu = <int*>malloc((m + 1) * sizeof(int))
    cdef int* ev = <int*>malloc((m + 1) * sizeof(int))
    cdef int* alive = <int*>malloc((m + 1) * sizeof(int))
    cdef int* picked = <int*>malloc((m + 1) * sizeof(int))
    cdef int* best = <int*>malloc((n + 1) * sizeof(int))
    cdef char* matched = <char*>calloc(n + 1, 1)
    cdef int u, v, x
    stages = []
    try:
        for e in range(m):
            u, v = edges[e]
            eu[e] = u
            ev[e] = v
            alive[e] = <int>e
        nalive = m
        while nalive:
            for i in range(n):
                best[i] = <int>m
            for i in range(nalive):
                x = alive[i]
                if x < best[eu[x]]:
                    best[eu[x]] = x
                if x < best[ev[x]]:
                    best[ev[x]] = x
            npicked = 0
            for i in range(nalive):
                x = alive[i]
                if best[eu[x]] == x and best[ev[x]] == x:
                    picked[npicked] = x
                    npicked += 1
            for i in range(npicked):
                matched[eu[picked[i]]] = 1
                matched[ev[picked[i]]] = 1
            stages.append([picked[i] for i in range(npicked)])
            e = 0
            for i in range(nalive):
                x = alive[i]
                if not matched[eu[x]] and not matched[ev[x]]:
                    alive[e] = x
                    e += 1
            nalive = e
    finally:
        free(eu); free(ev); free(alive); free(picked); free(best); free(matched)
    return stages
