"""Pure-Python kernels. ``_kernels.pyx`` implements the same functions with C types."""

INF_COST = 1 << 60


def functional_cycles(succ):
    """Vertex-disjoint cycles of a functional graph, each rotated to start at its minimum node."""
    n = len(succ)
    state = [0] * n  # 0 unseen, 1 on current walk, 2 done
    cycles = []
    for start in range(n):
        if state[start]:
            continue
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = succ[v]
        if state[v] == 1:
            cyc = path[path.index(v):]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        for u in path:
            state[u] = 2
    cycles.sort()
    return cycles


def ttc(prefs, endowment):
    """Top trading cycles on a market.

    ``prefs[a]`` lists houses most-preferred first and must contain
    ``endowment[a]``. Returns ``(house_of, stages)`` where ``stages[s]`` is the
    list of cycles (agent lists) traded at stage ``s``.
    """
    n = len(prefs)
    holder = [0] * n
    for a in range(n):
        holder[endowment[a]] = a
    removed = [False] * n
    assigned = [False] * n
    ptr = [0] * n
    house_of = [-1] * n
    remaining = n
    stages = []
    succ = [0] * n
    mark = [0] * n
    while remaining:
        alive = [a for a in range(n) if not assigned[a]]
        for a in alive:
            plist = prefs[a]
            p = ptr[a]
            while removed[plist[p]]:
                p += 1
            ptr[a] = p
            succ[a] = holder[plist[p]]
        stamp = len(stages) + 1
        for a in alive:
            mark[a] = 0
        cycles = []
        for start in alive:
            if mark[start]:
                continue
            path = []
            v = start
            while mark[v] == 0:
                mark[v] = -stamp
                path.append(v)
                v = succ[v]
            if mark[v] == -stamp:
                cyc = path[path.index(v):]
                k = cyc.index(min(cyc))
                cycles.append(cyc[k:] + cyc[:k])
            for u in path:
                mark[u] = stamp
        cycles.sort()
        for cyc in cycles:
            for a in cyc:
                h = prefs[a][ptr[a]]
                house_of[a] = h
                assigned[a] = True
                removed[h] = True
                remaining -= 1
        stages.append(cycles)
    return house_of, stages


def hungarian(cost):
    """Minimum-cost perfect assignment on a square matrix.

    Entries ``>= INF_COST`` are forbidden. Returns ``row -> column`` or
    ``None`` when no perfect assignment avoids forbidden entries.
    """
    n = len(cost)
    if n == 0:
        return []
    big = 1
    for row in cost:
        for c in row:
            if c < INF_COST and c + 1 > big:
                big = c + 1
    # an assignment using any forbidden cell must cost more than every allowed one
    big = big * (n + 1)
    a = [[c if c < INF_COST else big for c in row] for row in cost]

    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF_COST] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = a[i0 - 1]
            ui0 = u[i0]
            delta = INF_COST
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
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
    for i in range(n):
        if cost[i][assign[i]] >= INF_COST:
            return None
    return assign


def hopcroft_karp(n_left, n_right, adj):
    """Maximum bipartite matching; ``adj[i]`` lists right vertices of left vertex ``i``.

    Returns ``match_left`` with ``-1`` for unmatched left vertices.
    """
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left
    unreached = n_left + n_right + 1

    def bfs():
        queue = []
        for i in range(n_left):
            if match_l[i] < 0:
                dist[i] = 0
                queue.append(i)
            else:
                dist[i] = unreached
        found = False
        head = 0
        while head < len(queue):
            i = queue[head]
            head += 1
            for j in adj[i]:
                k = match_r[j]
                if k < 0:
                    found = True
                elif dist[k] == unreached:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        return found

    def dfs(root):
        # iterative DFS along layered edges
        stack = [(root, 0)]
        path = []
        while stack:
            i, pos = stack[-1]
            edges = adj[i]
            advanced = False
            while pos < len(edges):
                j = edges[pos]
                pos += 1
                k = match_r[j]
                if k < 0:
                    stack[-1] = (i, pos)
                    path.append((i, j))
                    for pi, pj in path:
                        match_l[pi] = pj
                        match_r[pj] = pi
                    return True
                if dist[k] == dist[i] + 1:
                    stack[-1] = (i, pos)
                    path.append((i, j))
                    stack.append((k, 0))
                    advanced = True
                    break
            if not advanced:
                dist[i] = unreached
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for i in range(n_left):
            if match_l[i] < 0:
                dfs(i)
    return match_l


def greedy_lfmm(n, edges):
    """Staged greedy lex-first maximal matching.

    ``edges`` is a list of ``(u, v)`` pairs in ascending order. Every stage adds
    each remaining edge that is smaller than all of its remaining neighbours,
    then deletes the edges incident to their endpoints. Returns the list of
    stages, each a sorted list of edge positions.
    """
    m = len(edges)
    alive = list(range(m))
    matched = [False] * n
    stages = []
    none = m
    while alive:
        best = [none] * n
        for e in alive:
            u, v = edges[e]
            if e < best[u]:
                best[u] = e
            if e < best[v]:
                best[v] = e
        picked = []
        for e in alive:
            u, v = edges[e]
            if best[u] == e and best[v] == e:
                picked.append(e)
        for e in picked:
            u, v = edges[e]
            matched[u] = True
            matched[v] = True
        stages.append(picked)
        alive = [e for e in alive if not matched[edges[e][0]] and not matched[edges[e][1]]]
    return stages
