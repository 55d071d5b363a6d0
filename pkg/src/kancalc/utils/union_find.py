from collections import Counter
from typing import Callable, Hashable, Iterable


class UnionFind:
    """
    Disjoint sets with union by rank and path compression.

    Used for connected components of categories and for colimits of
    Set-valued functors, where the classes are the elements of the colimit.

    >>> uf = UnionFind()
    >>> uf.union(1, 2)
    >>> uf.find(2) == uf.find(1)
    True
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent = {}
        self.rank = Counter()
        for item in items:
            self.parent[item] = item

    def find(self, x):
        try:
            if self.parent[x] != x:
                self.parent[x] = self.find(self.parent[x])
        except KeyError:
            self.parent[x] = x
        return self.parent[x]

    def union(self, x, y):
        px = self.find(x)
        py = self.find(y)
        if px == py:
            return
        if self.rank[px] == self.rank[py]:
            self.parent[py] = px
            self.rank[px] += 1
        elif self.rank[px] > self.rank[py]:
            self.parent[py] = px
        else:
            self.parent[px] = py

    def classes(self, key: Callable = None) -> list[list]:
        """Classes sorted internally and among themselves by their least member."""
        groups = {}
        for item in self.parent:
            groups.setdefault(self.find(item), []).append(item)
        out = [sorted(members, key=key) for members in groups.values()]
        out.sort(key=lambda members: key(members[0]) if key else members[0])
        return out
