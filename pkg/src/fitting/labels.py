# src/fitting/labels.py
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple


@dataclass(slots=True, eq=False)
class Label:
    """State of a partial path ending at `vertex`: cost, arcs used, last step value."""
    c: float
    k: int
    st: float
    pred: Optional["Label"] = None
    origin: int = -1
    vertex: int = 0
    seq: int = 0

    def triple(self) -> Tuple[float, int, float]:
        return (self.c, self.k, self.st)

    def arcs(self) -> List[Tuple[int, int]]:
        """Arcs of the partial path from the source, in order."""
        chain = []
        node = self
        while node is not None and node.origin >= 0:
            chain.append((node.origin, node.vertex))
            node = node.pred
        chain.reverse()
        return chain


def dominates(a: Label, b: Label) -> bool:
    """a is no worse than b in cost, arcs and step value, strictly better in one."""
    return (
        a.c <= b.c
        and a.k <= b.k
        and a.st >= b.st
        and (a.c < b.c or a.k < b.k or a.st > b.st)
    )


class LayerClosed(RuntimeError):
    """A label was inserted into a layer the forward sweep already processed."""


class LabelStore:
    """Per-vertex sets of mutually non-dominated, pairwise distinct labels."""

    def __init__(self, n_vertices: int):
        self._layers: Dict[int, List[Label]] = {}
        self._closed_upto = -1
        self._seq = 0
        self.n_vertices = n_vertices
        self.created = 0
        self.dominated = 0

    def insert(self, label: Label) -> bool:
        """
        Adds the label unless an equal or dominating label is stored, then
        deletes every stored label it dominates. Returns whether it was kept.
        """
        h = label.vertex
        if h <= self._closed_upto:
            raise LayerClosed(f"vertex {h} already processed (closed up to {self._closed_upto})")
        self.created += 1
        bucket = self._layers.setdefault(h, [])
        c, k, st = label.c, label.k, label.st
        survivors = []
        for other in bucket:
            oc, ok, ost = other.c, other.k, other.st
            if oc <= c and ok <= k and ost >= st:
                # Covers both "dominated" and "identical triple"
                self.dominated += 1
                return False
            if c <= oc and k <= ok and st >= ost:
                continue
            survivors.append(other)
        if len(survivors) != len(bucket):
            self.dominated += len(bucket) - len(survivors)
            bucket[:] = survivors
        label.seq = self._seq
        self._seq += 1
        bucket.append(label)
        return True

    def pop_layer(self, i: int) -> List[Label]:
        """
        Closes vertex i and returns its labels in extraction order: min cost,
        then larger st, then fewer arcs, then insertion order.
        """
        self._closed_upto = i
        labels = self._layers.pop(i, [])
        labels.sort(key=lambda l: (l.c, -l.st, l.k, l.seq))
        return labels

    def pending(self):
        """(vertex, label) pairs stored at vertices not yet processed."""
        for h, bucket in self._layers.items():
            for label in bucket:
                yield h, label

    def size(self, h: int) -> int:
        return len(self._layers.get(h, ()))
