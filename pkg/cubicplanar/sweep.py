"""Parameter grids for experiments: Cartesian or zipped dimensions."""

from __future__ import annotations

from itertools import product
from typing import TYPE_CHECKING, Any

from cubicplanar._utils import at_least_tuple

if TYPE_CHECKING:
    from collections.abc import Callable, Generator, Iterator, Mapping, Sequence


def _check_dim_lengths(dim_seqs: list[Sequence[Any]], dims: tuple[str, ...]) -> None:
    if len({len(seq) for seq in dim_seqs}) > 1:
        msg = f"Dimensions {dims} are zipped together but have different lengths."
        raise ValueError(msg)


class Sweep:
    """A grid of experiment parameters.

    Dimensions listed together in one tuple of ``dims`` are zipped, all
    other dimensions form a Cartesian product. Without ``dims`` the full
    product is formed.

    Parameters
    ----------
    items
        Map from parameter name to the sequence of its values.
    dims
        Groups of parameter names; names in one tuple are zipped.
    exclude
        Predicate on a combination; ``True`` drops the combination.
    constants
        Values added to every combination (without overwriting swept ones).
    derivers
        Map from a parameter name to a function of the combination whose
        result is stored under that name.

    Examples
    --------
    >>> sweep = Sweep({"n": [1000, 2000], "sample": range(2)})
    >>> len(sweep), sweep.list()[1]
    (4, {'n': 1000, 'sample': 1})
    >>> Sweep({"n": [1000, 2000], "window": [0.01, 0.02]}, dims=[("n", "window")]).list()
    [{'n': 1000, 'window': 0.01}, {'n': 2000, 'window': 0.02}]

    """

    def __init__(
        self,
        items: Mapping[str, Sequence[Any]],
        dims: list[str | tuple[str, ...]] | None = None,
        exclude: Callable[[Mapping[str, Any]], bool] | None = None,
        constants: Mapping[str, Any] | None = None,
        derivers: dict[str, Callable[[dict[str, Any]], Any]] | None = None,
    ) -> None:
        self.items = dict(items)
        self.dims = dims
        self.exclude = exclude
        self.constants = constants
        self.derivers = derivers
        missing = {d for group in dims or [] for d in at_least_tuple(group)} - self.items.keys()
        if missing:
            msg = f"Dimensions {sorted(missing)} are not among the sweep items."
            raise ValueError(msg)

    def _groups(self) -> list[tuple[str, ...]]:
        if self.dims is None:
            return [(name,) for name in self.items]
        grouped = [at_least_tuple(group) for group in self.dims]
        listed = {d for group in grouped for d in group}
        return grouped + [(name,) for name in self.items if name not in listed]

    def generate(self) -> Generator[dict[str, Any], None, None]:
        """Yield the combinations in order, the last dimension varying fastest."""
        if not self.items:
            return
        parts = []
        for dims in self._groups():
            seqs = [list(self.items[d]) for d in dims]
            _check_dim_lengths(seqs, dims)
            parts.append([dict(zip(dims, values)) for values in zip(*seqs)])
        for combo in product(*parts):
            combination = {k: v for part in combo for k, v in part.items()}
            for key, value in (self.constants or {}).items():
                combination.setdefault(key, value)
            for key, func in (self.derivers or {}).items():
                combination[key] = func(combination)
            if self.exclude is None or not self.exclude(combination):
                yield combination

    def __iter__(self) -> Iterator[dict[str, Any]]:
        return self.generate()

    def list(self) -> list[dict[str, Any]]:
        """The combinations as a list."""
        return list(self.generate())

    def __len__(self) -> int:
        """Number of combinations."""
        if self.exclude is not None:
            return len(self.list())
        if not self.items:
            return 0
        total = 1
        for dims in self._groups():
            total *= len(self.items[dims[0]])
        return total

    def product(self, *others: Sweep) -> Sweep:
        """Cartesian product of this sweep with ``others``."""
        items = dict(self.items)
        dims: list[str | tuple[str, ...]] = list(self._groups())
        constants = dict(self.constants or {})
        derivers = dict(self.derivers or {})
        excludes = [f for f in (self.exclude,) if f is not None]
        for other in others:
            if not isinstance(other, Sweep):
                msg = "All arguments must be Sweep instances."
                raise TypeError(msg)
            overlap = items.keys() & other.items.keys()
            if overlap:
                msg = f"Both sweeps define {sorted(overlap)}."
                raise ValueError(msg)
            items.update(other.items)
            dims.extend(other._groups())
            constants.update(other.constants or {})
            derivers.update(other.derivers or {})
            if other.exclude is not None:
                excludes.append(other.exclude)
        return Sweep(
            items,
            dims=dims,
            exclude=(lambda c: any(f(c) for f in excludes)) if excludes else None,
            constants=constants or None,
            derivers=derivers or None,
        )

    def add_derivers(self, **derivers: Callable[[dict[str, Any]], Any]) -> Sweep:
        """A copy of the sweep with additional derived parameters.

        Examples
        --------
        >>> sweep = Sweep({"n": [1000, 2000]}).add_derivers(table_order=lambda c: 2 * c["n"])
        >>> sweep.list()
        [{'n': 1000, 'table_order': 2000}, {'n': 2000, 'table_order': 4000}]

        """
        return Sweep(
            self.items,
            dims=self.dims,
            exclude=self.exclude,
            constants=self.constants,
            derivers={**(self.derivers or {}), **derivers},
        )
