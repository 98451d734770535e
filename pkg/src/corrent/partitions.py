"""Set partitions of qubit labels, as needed by the k-separability checks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering {1..n}, sorted by smallest member."""

    blocks: tuple

    @property
    def n_qubits(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def validate(self):
        labels = [q for b in self.blocks for q in b]
        n = len(labels)
        if sorted(labels) != list(range(1, n + 1)):
            raise ValueError(f"blocks {self.blocks!r} do not partition 1..{n}")
        for b in self.blocks:
            if list(b) != sorted(b):
                raise ValueError(f"block {b!r} is not sorted")
        firsts = [b[0] for b in self.blocks]
        if firsts != sorted(firsts):
            raise ValueError("blocks are not ordered by smallest member")

    def __str__(self):
        return "|".join("".join(str(q) for q in b) for b in self.blocks)


def make_partition(blocks) -> Partition:
    """Canonicalize and validate a block list like [[2, 4], [1], [3]]."""
    canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
    p = Partition(canon)
    p.validate()
    return p


def enumerate_k_partitions(n: int, k: int) -> list[Partition]:
    """All set partitions of {1..n} into exactly k blocks, in a fixed order.

    Enumeration is by restricted growth strings, so blocks come out sorted by
    smallest member and the order is reproducible.
    """
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} outside 1..{n}")
    out = []

    def grow(label: int, assignment: list[int], used: int):
        if label > n:
            if used == k:
                blocks = [[] for _ in range(k)]
                for q, b in enumerate(assignment, start=1):
                    blocks[b].append(q)
                out.append(Partition(tuple(tuple(b) for b in blocks)))
            return
        # Pruning: remaining labels must still be able to open k blocks.
        if used + (n - label + 1) < k:
            return
        for b in range(used):
            grow(label + 1, assignment + [b], used)
        if used < k:
            grow(label + 1, assignment + [used], used + 1)

    grow(1, [], 0)
    return out


def partition_shape(p: Partition) -> tuple:
    """Sorted block sizes, e.g. (1, 3) or (2, 2)."""
    return tuple(sorted(len(b) for b in p.blocks))
