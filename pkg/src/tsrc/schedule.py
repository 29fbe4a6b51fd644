"""Slot layout that lets several tasks time-share one delay loop.

One delay period of duration ``tau`` is divided into slots of duration ``h``.
Each task owns one contiguous block of slots (one slot per virtual node) and
consecutive blocks are separated by two guard slots so the physical coupler
can switch without interference:

    [task1 x N1][gap][gap][task2 x N2][gap][gap]...[task_k x Nk]

The layout therefore uses ``sum(N_p) + 2*(k-1)`` of the ``floor(tau/h)``
available slots.  Interleaving stacks every task's per-node drives into one
global drive matrix following this layout; deinterleaving splits a global
state matrix back into per-task state matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import CapacityError

GUARD_SLOTS = 2  # guard gap between consecutive task blocks, in slots
PAD_POLICIES = ("zero", "hold")

# Tolerance used when turning the duration ratio tau/h into a slot count, so
# that e.g. tau = 20*h does not floor to 19 through rounding.
_RATIO_EPS = 1e-9


class Slot(NamedTuple):
    """One slot of the delay period: a task's virtual node, or a guard gap."""

    task_id: str | None  # None marks a guard gap
    node_index: int | None

    @property
    def is_gap(self) -> bool:
        return self.task_id is None


@dataclass(frozen=True)
class TaskSlotSpec:
    """A task's slot-block request: its id, node count and time-share fraction."""

    task_id: str
    node_count: int
    share: Fraction | None = None

    def __post_init__(self):
        if not self.task_id:
            raise ValueError("task_id must be a non-empty string")
        if int(self.node_count) != self.node_count or self.node_count < 1:
            raise ValueError(f"node_count must be a positive integer, got {self.node_count!r}")
        object.__setattr__(self, "node_count", int(self.node_count))
        if self.share is not None and not (0 < self.share <= 1):
            raise ValueError(f"share must lie in (0, 1], got {self.share}")

    @classmethod
    def from_share(cls, task_id: str, share: Fraction, sample_slots: int) -> "TaskSlotSpec":
        """Build a spec whose node count is share * sample_slots (must be integral)."""
        share = Fraction(share)
        nodes = share * sample_slots
        if nodes.denominator != 1:
            raise ValueError(
                f"task {task_id!r}: share {share} of {sample_slots} slots gives "
                f"non-integral node count {float(nodes):g}"
            )
        return cls(task_id=task_id, node_count=int(nodes), share=share)


def slot_capacity(tau: float, h: float) -> int:
    """Number of slots of duration h that fit in one delay period tau."""
    if tau <= 0 or h <= 0:
        raise ValueError(f"tau and h must be positive, got tau={tau}, h={h}")
    return int(np.floor(tau / h + _RATIO_EPS))


def max_nodes(tau: float, h: float, k: int) -> int:
    """Largest per-task node count when k equal tasks share the loop.

    With S = floor(tau/h) slots per period and 2 guard slots between each of
    the k blocks, each task can hold floor((S - 2*(k-1)) / k) nodes.  For
    k = 1 this reduces to S.
    """
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    total = slot_capacity(tau, h)
    overhead = GUARD_SLOTS * (k - 1)
    nodes = (total - overhead) // k
    if nodes < 1:
        raise CapacityError(
            f"no capacity for {k} tasks: {total} slots per period, "
            f"{overhead} consumed by guard gaps"
        )
    return int(nodes)


@dataclass(frozen=True)
class TdmSchedule:
    """Concrete slot layout of one delay period.

    ``slots`` covers only the occupied prefix of the period (task blocks plus
    guard gaps); trailing unused capacity is not materialized.  ``t_sample``
    is the macro-step duration the shares refer to, kept for reporting.
    """

    tasks: tuple[TaskSlotSpec, ...]
    slots: tuple[Slot, ...]
    h: float
    tau: float
    t_sample: float | None = None
    _offsets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        offsets = {}
        position = 0
        for spec in self.tasks:
            offsets[spec.task_id] = position
            position += spec.node_count + GUARD_SLOTS
        object.__setattr__(self, "_offsets", offsets)

    @property
    def k(self) -> int:
        return len(self.tasks)

    @property
    def slot_count(self) -> int:
        return len(self.slots)

    @property
    def task_ids(self) -> tuple[str, ...]:
        return tuple(spec.task_id for spec in self.tasks)

    def node_count(self, task_id: str) -> int:
        for spec in self.tasks:
            if spec.task_id == task_id:
                return spec.node_count
        raise KeyError(task_id)

    def columns(self, task_id: str) -> slice:
        """Column range of this task's block in the global slot stream."""
        start = self._offsets[task_id]
        return slice(start, start + self.node_count(task_id))

    def to_text(self) -> str:
        """One line per slot: ``slot_index<TAB>task_id|GAP<TAB>node_index``."""
        lines = []
        for index, slot in enumerate(self.slots):
            name = "GAP" if slot.is_gap else slot.task_id
            node = "-" if slot.is_gap else str(slot.node_index)
            lines.append(f"{index}\t{name}\t{node}")
        return "\n".join(lines) + "\n"


def build_schedule(
    tasks: Iterable[TaskSlotSpec],
    tau: float,
    h: float,
    t_sample: float | None = None,
) -> TdmSchedule:
    """Lay the tasks' blocks out in input order, two guard slots between blocks."""
    tasks = tuple(tasks)
    if not tasks:
        raise ValueError("at least one task is required")
    seen = set()
    for spec in tasks:
        if spec.task_id in seen:
            raise ValueError(f"duplicate task_id {spec.task_id!r}")
        seen.add(spec.task_id)

    capacity = slot_capacity(tau, h)
    needed = sum(spec.node_count for spec in tasks) + GUARD_SLOTS * (len(tasks) - 1)
    if needed > capacity:
        raise CapacityError(
            f"layout needs {needed} slots but the delay loop holds {capacity} "
            f"(short by {needed - capacity})"
        )

    slots: list[Slot] = []
    for position, spec in enumerate(tasks):
        if position > 0:
            slots.extend([Slot(None, None)] * GUARD_SLOTS)
        slots.extend(Slot(spec.task_id, node) for node in range(spec.node_count))
    return TdmSchedule(tasks=tasks, slots=tuple(slots), h=h, tau=tau, t_sample=t_sample)


def sample_and_hold(series: np.ndarray, t_s: float) -> np.ndarray:
    """Zero-order hold: p(n) = value of the latest sample at or before n*t_s.

    ``series`` is an ordered array of (time, value) rows.  The output covers
    n = 0 .. floor(t_max / t_s).  A step with no sample at or before it (the
    series starts after t=0) is an error.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 2 or series.shape[1] != 2 or series.shape[0] == 0:
        raise ValueError(f"series must be a non-empty (n, 2) array of (time, value), got shape {series.shape}")
    if t_s <= 0:
        raise ValueError(f"t_s must be positive, got {t_s}")
    times = series[:, 0]
    if np.any(np.diff(times) < 0):
        raise ValueError("series must be sorted by time")

    n_steps = int(np.floor(times[-1] / t_s + _RATIO_EPS)) + 1
    # Tiny forward tolerance so n*t_s hits samples recorded at the same
    # mathematical instant despite floating-point representation of n*t_s.
    sample_times = np.arange(n_steps) * t_s + _RATIO_EPS * t_s
    indices = np.searchsorted(times, sample_times, side="right") - 1
    if indices[0] < 0:
        raise ValueError(
            f"no sample at or before t=0 (series starts at t={times[0]:g})"
        )
    return series[indices, 1]


def interleave(
    per_task_drives: Mapping[str, np.ndarray],
    schedule: TdmSchedule,
    pad: str = "zero",
) -> np.ndarray:
    """Stack per-task drive matrices into the global slot stream.

    Each task's drives have shape (steps_p, N_p).  The result has shape
    (max steps, slot_count); at every macro step each task block carries that
    task's drives in layout order and guard slots carry zero.  Tasks shorter
    than the longest one are padded with zeros (``pad="zero"``) or by holding
    their last drive row (``pad="hold"``).
    """
    if pad not in PAD_POLICIES:
        raise ValueError(f"pad must be one of {PAD_POLICIES}, got {pad!r}")
    arrays = {}
    for spec in schedule.tasks:
        if spec.task_id not in per_task_drives:
            raise ValueError(f"missing drive sequence for scheduled task {spec.task_id!r}")
        arr = np.asarray(per_task_drives[spec.task_id], dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != spec.node_count:
            raise ValueError(
                f"task {spec.task_id!r}: drives must have shape (steps, {spec.node_count}), "
                f"got {arr.shape}"
            )
        arrays[spec.task_id] = arr

    steps = max(arr.shape[0] for arr in arrays.values())
    stream = np.zeros((steps, schedule.slot_count))
    for spec in schedule.tasks:
        arr = arrays[spec.task_id]
        block = schedule.columns(spec.task_id)
        stream[: arr.shape[0], block] = arr
        if pad == "hold" and 0 < arr.shape[0] < steps:
            stream[arr.shape[0]:, block] = arr[-1]
    return stream


def deinterleave(global_states: np.ndarray, schedule: TdmSchedule) -> dict[str, np.ndarray]:
    """Split a global state (or drive) matrix back into per-task matrices.

    Guard-gap columns are dropped.  Inverse of ``interleave`` up to padding.
    """
    global_states = np.asarray(global_states)
    if global_states.ndim != 2 or global_states.shape[1] != schedule.slot_count:
        raise ValueError(
            f"expected (steps, {schedule.slot_count}) matrix, got shape {global_states.shape}"
        )
    return {
        spec.task_id: global_states[:, schedule.columns(spec.task_id)].copy()
        for spec in schedule.tasks
    }
