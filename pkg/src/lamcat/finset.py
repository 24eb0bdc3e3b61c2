"""Finite functions as explicit lookup tables.

Carriers are tuples of hashable values in a fixed enumeration order.  A
table stores one output per domain element, so composition, equality and
the injectivity/surjectivity tests are plain tuple work.  ``all_functions``
enumerates a full function space in value-lexicographic order behind a
size cap, so callers cannot accidentally materialize an astronomically
large space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterator


DEFAULT_CAP = 10**6


class SizeOverflow(Exception):
    """A requested enumeration exceeds the configured size cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"would enumerate {size} elements, cap is {cap}")
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class FnTable:
    """A total function ``dom -> cod`` tabulated in domain order."""

    dom: tuple[Hashable, ...]
    cod: tuple[Hashable, ...]
    values: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.dom):
            raise ValueError(
                f"{len(self.dom)} domain elements but {len(self.values)} values"
            )
        cod = set(self.cod)
        for v in self.values:
            if v not in cod:
                raise ValueError(f"value {v!r} is not in the codomain")

    @cached_property
    def _index(self) -> dict[Hashable, int]:
        return {x: i for i, x in enumerate(self.dom)}

    def __call__(self, x: Hashable) -> Hashable:
        try:
            return self.values[self._index[x]]
        except KeyError:
            raise ValueError(f"{x!r} is not in the domain") from None

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(self.cod)

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective


def identity_fn(carrier: tuple[Hashable, ...]) -> FnTable:
    return FnTable(carrier, carrier, carrier)


def compose_fn(g: FnTable, f: FnTable) -> FnTable:
    """The composite ``g after f``; the middle carriers must match exactly."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose: codomain {f.cod} is not domain {g.dom}")
    return FnTable(f.dom, g.cod, tuple(g(v) for v in f.values))


def fn_from_callable(
    dom: tuple[Hashable, ...], cod: tuple[Hashable, ...], fn: Callable
) -> FnTable:
    return FnTable(dom, cod, tuple(fn(x) for x in dom))


def function_space_size(dom_size: int, cod_size: int) -> int:
    # the empty function is the single map out of an empty domain
    return cod_size**dom_size if dom_size else 1


def all_functions(
    dom: tuple[Hashable, ...],
    cod: tuple[Hashable, ...],
    cap: int = DEFAULT_CAP,
) -> Iterator[FnTable]:
    """Every function ``dom -> cod``, ordered lexicographically by values."""
    size = function_space_size(len(dom), len(cod))
    if size > cap:
        raise SizeOverflow(size, cap)
    for values in itertools.product(cod, repeat=len(dom)):
        yield FnTable(dom, cod, values)
