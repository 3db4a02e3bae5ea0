"""Class-structured data-generating models and per-cell sampling.

Indices k (row) and i (column) are 1-based in every user-facing rule, so
"i even" in a model description means columns 2, 4, ... ; numpy arrays are
0-based as usual (array row r holds k = r + 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import distributions as dist
from .io import FormatError
from .rng import grid_uniforms

DEFAULT_MAX_CLASSES = 16


@dataclass(frozen=True)
class Periodic:
    """class_of(k, i) = table[(k-1) % rows][(i-1) % cols]."""

    table: tuple  # tuple of tuples of class ids

    @property
    def row_period(self):
        return len(self.table)

    @property
    def col_period(self):
        return len(self.table[0])

    def grid(self, p, n):
        t = np.asarray(self.table, dtype=int)
        r = np.arange(p) % t.shape[0]
        c = np.arange(n) % t.shape[1]
        return t[np.ix_(r, c)]

    def to_json(self):
        return {"row_period": self.row_period, "col_period": self.col_period,
                "table": [list(row) for row in self.table]}


@dataclass(frozen=True)
class RowRule:
    """Rows k_min <= k <= k_max (and k % k_mod == k_res) get ``cols`` cycled over i."""

    cols: tuple
    k_min: int = 1
    k_max: Optional[int] = None
    k_mod: int = 1
    k_res: int = 0

    def matches(self, k):
        return (k >= self.k_min and (self.k_max is None or k <= self.k_max)
                and k % self.k_mod == self.k_res % self.k_mod)

    def to_json(self):
        return {"k_min": self.k_min, "k_max": self.k_max, "k_mod": self.k_mod,
                "k_res": self.k_res, "cols": list(self.cols)}


@dataclass(frozen=True)
class Rules:
    rules: tuple

    def grid(self, p, n):
        out = np.empty((p, n), dtype=int)
        for r in range(p):
            k = r + 1
            rule = next((ru for ru in self.rules if ru.matches(k)), None)
            if rule is None:
                raise ValueError(f"no assignment rule covers row k={k}")
            cols = np.asarray(rule.cols, dtype=int)
            out[r] = cols[np.arange(n) % cols.size]
        return out

    def to_json(self):
        return {"rules": [ru.to_json() for ru in self.rules]}


@dataclass(frozen=True)
class ModelSpec:
    p: int
    n: int
    dists: tuple
    assign: object
    name: str = "custom"
    max_classes: int = DEFAULT_MAX_CLASSES
    _grid: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise ValueError(f"p and n must be positive, got p={self.p}, n={self.n}")
        if len(self.dists) > self.max_classes:
            raise ValueError(f"{len(self.dists)} classes exceeds the cap of {self.max_classes}")
        if len(set(self.dists)) != len(self.dists):
            raise ValueError("two classes share a distribution; merge them into one class")
        g = self.assign.grid(self.p, self.n)
        if g.min() < 0 or g.max() >= len(self.dists):
            raise ValueError("assignment refers to an undefined class id")
        g.setflags(write=False)
        object.__setattr__(self, "_grid", g)

    @property
    def num_classes(self):
        return len(self.dists)

    def class_grid(self) -> np.ndarray:
        """p x n array of class ids."""
        return self._grid

    def class_of(self, k: int, i: int) -> int:
        return int(self._grid[k - 1, i - 1])

    def dist_of(self, k: int, i: int):
        return self.dists[self.class_of(k, i)]

    def resized(self, p: int, n: int) -> "ModelSpec":
        return replace(self, p=p, n=n, _grid=None)

    def row_classes(self):
        """(label per row, distinct row patterns): rows sharing a pattern are exchangeable."""
        patterns, labels = np.unique(self._grid, axis=0, return_inverse=True)
        return labels.reshape(-1), patterns

    def is_column_iid(self) -> bool:
        """True when every row is identically distributed across columns."""
        g = self._grid
        return bool(np.all(g == g[:, :1]))

    def to_json(self) -> dict:
        return {"name": self.name, "p": self.p, "n": self.n,
                "max_classes": self.max_classes,
                "classes": [{"id": c, "dist": d.to_json()} for c, d in enumerate(self.dists)],
                "assign": self.assign.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def model_from_json(obj: dict) -> ModelSpec:
    """Parse the ModelSpec JSON layout; raises ValueError on malformed input."""
    try:
        classes = sorted(obj["classes"], key=lambda c: c["id"])
        ids = [c["id"] for c in classes]
        if ids != list(range(len(ids))):
            raise ValueError(f"class ids must be 0..{len(ids) - 1}, got {ids}")
        dists = tuple(dist.from_json(c["dist"]) for c in classes)
        a = obj["assign"]
        if "table" in a:
            table = tuple(tuple(int(x) for x in row) for row in a["table"])
            if "row_period" in a and a["row_period"] != len(table):
                raise ValueError("row_period does not match table")
            if "col_period" in a and any(len(row) != a["col_period"] for row in table):
                raise ValueError("col_period does not match table")
            assign = Periodic(table)
        elif "rules" in a:
            assign = Rules(tuple(RowRule(cols=tuple(int(x) for x in r["cols"]),
                                         k_min=int(r.get("k_min", 1)),
                                         k_max=r.get("k_max"),
                                         k_mod=int(r.get("k_mod", 1)),
                                         k_res=int(r.get("k_res", 0))) for r in a["rules"]))
        else:
            raise ValueError("assign needs either 'table' or 'rules'")
        cap = int(obj.get("max_classes", max(DEFAULT_MAX_CLASSES, len(dists))))
        return ModelSpec(int(obj["p"]), int(obj["n"]), dists, assign,
                         name=obj.get("name", "custom"), max_classes=cap)
    except KeyError as exc:
        raise ValueError(f"model JSON is missing field {exc}") from None


def load_model(path) -> ModelSpec:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{exc.lineno}: malformed JSON ({exc.msg})") from None
    return model_from_json(obj)


def sample_matrix(model: ModelSpec, seed: int, stream: int = 0) -> np.ndarray:
    """Draw the p x n data matrix; cell (k, i) uses its own Philox counter."""
    u = grid_uniforms(seed, model.p, model.n, stream)
    g = model.class_grid()
    out = np.empty((model.p, model.n))
    for c, d in enumerate(model.dists):
        mask = g == c
        if mask.any():
            out[mask] = d.quantile(u[mask])
    return out
