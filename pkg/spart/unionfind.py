"""Disjoint-set forest used to glue blocks of spatial partitions."""
from typing import Dict, Hashable, Iterable, List


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.rank: Dict[Hashable, int] = {}
        self.size: Dict[Hashable, int] = {}
        for item in items:
            self.add(item)

    def add(self, item: Hashable):
        if item not in self.parent:
            self.parent[item] = item
            self.rank[item] = 0
            self.size[item] = 1

    def find(self, item: Hashable) -> Hashable:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: Hashable, b: Hashable):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if self.rank[a] < self.rank[b]:
            a, b = b, a
        elif self.rank[a] == self.rank[b]:
            self.rank[a] += 1
        self.parent[b] = a
        self.size[a] += self.size[b]

    def union_all(self, items: Iterable[Hashable]):
        items = iter(items)
        first = next(items, None)
        for item in items:
            self.union(first, item)

    def groups(self) -> List[List[Hashable]]:
        """The connected components, each in insertion order."""
        by_root: Dict[Hashable, List[Hashable]] = {}
        for item in self.parent:
            by_root.setdefault(self.find(item), []).append(item)
        return list(by_root.values())

    def __len__(self):
        return sum(1 for item in self.parent if self.parent[item] == item)
