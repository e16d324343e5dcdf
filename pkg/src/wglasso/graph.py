"""Conditional-independence graph read off a precision matrix."""

from dataclasses import dataclass

import numpy as np

from .errors import NonSquareInput


@dataclass(frozen=True)
class GraphExport:
    labels: tuple
    edges: list  # (i, j, omega_ij) with i < j
    degrees: tuple

    def hub_ranking(self):
        """``(label, degree)`` pairs by degree descending, ties broken by label."""
        pairs = zip(self.labels, self.degrees)
        return sorted(pairs, key=lambda t: (-t[1], t[0]))


def from_precision(omega, labels=None) -> GraphExport:
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise NonSquareInput(f"expected a square matrix, got shape {omega.shape}")
    p = omega.shape[0]
    if labels is None:
        labels = tuple(str(i) for i in range(p))
    labels = tuple(labels)
    if len(labels) != p:
        raise ValueError(f"{len(labels)} labels for {p} variables")
    iu, ju = np.nonzero(np.triu(omega, 1))
    edges = [(int(i), int(j), float(omega[i, j])) for i, j in zip(iu, ju)]
    degrees = np.zeros(p, dtype=int)
    for i, j, _ in edges:
        degrees[i] += 1
        degrees[j] += 1
    return GraphExport(labels, edges, tuple(int(v) for v in degrees))


def to_edgelist(g: GraphExport) -> str:
    lines = ["source,target,weight"]
    lines += [f"{g.labels[i]},{g.labels[j]},{w:.17g}" for i, j, w in g.edges]
    return "\n".join(lines) + "\n"


def _quote(label):
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: GraphExport, name="precision") -> str:
    """Undirected DOT graph; edge ``weight`` is ``|omega_ij|``."""
    lines = [f"graph {name} {{"]
    lines += [f"  {_quote(lab)};" for lab in g.labels]
    lines += [f"  {_quote(g.labels[i])} -- {_quote(g.labels[j])} [weight={abs(w):.17g}];"
              for i, j, w in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def hubs_csv(g: GraphExport) -> str:
    lines = ["node,degree"] + [f"{lab},{deg}" for lab, deg in g.hub_ranking()]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str):
    """Edge set ``{(source, target)}`` from :func:`to_edgelist` output."""
    rows = text.strip().splitlines()[1:]
    return {tuple(r.split(",")[:2]) for r in rows if r}
