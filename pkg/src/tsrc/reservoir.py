"""Masked, delayed, sinusoidal virtual-node dynamics of a single nonlinear node.

The reservoir is a delay loop holding one state value per virtual node.  At
every macro time step ``n`` each node ``i`` is updated from its own previous
state and a per-node drive (the masked, held input):

    state_i(n) = sin(alpha * state_i(n-1) + beta * drive_i(n) + phi)

State matrices are plain float64 arrays of shape ``(macro_steps, node_count)``;
row ``n`` is the full set of node states at macro step ``n``.  All values lie
in ``[-1, 1]`` and every function here is deterministic and side-effect free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK_MODES = ("binary", "continuous")
COUPLING_MODES = ("self", "neighbor")


@dataclass(frozen=True)
class ReservoirParams:
    """Gains and bias of the sinusoidal node update.

    alpha: feedback gain on the node's own delayed state.
    beta:  input gain on the masked drive.
    phi:   bias (radians) inside the sine.
    nonlinearity: only "sine" is implemented; the field exists so a different
        node response can be slotted in later without changing call sites.
    """

    alpha: float
    beta: float
    phi: float
    nonlinearity: str = "sine"

    def __post_init__(self):
        for name in ("alpha", "beta", "phi"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.nonlinearity != "sine":
            raise ValueError(
                f"unsupported nonlinearity {self.nonlinearity!r}; only 'sine' is available"
            )


@dataclass(frozen=True)
class Mask:
    """Fixed per-node input coefficients.

    ``values`` has shape ``(node_count,)`` for scalar-input tasks or
    ``(node_count, input_dim)`` for vector-input tasks.  Binary masks contain
    only -1 and +1; continuous masks lie in [-1, 1].  The mask is periodic:
    node ``i`` always sees coefficient row ``i`` regardless of the macro step.
    """

    values: np.ndarray
    mode: str = "binary"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.ndim not in (1, 2) or values.size == 0:
            raise ValueError(f"mask values must be a non-empty 1-D or 2-D array, got shape {values.shape}")
        if self.mode not in MASK_MODES:
            raise ValueError(f"mask mode must be one of {MASK_MODES}, got {self.mode!r}")
        if not np.isfinite(values).all():
            raise ValueError("mask values must be finite")
        if self.mode == "binary":
            if not np.isin(values, (-1.0, 1.0)).all():
                raise ValueError("binary mask entries must be exactly -1 or +1")
        elif np.abs(values).max() > 1.0:
            raise ValueError("continuous mask entries must lie in [-1, 1]")

    @property
    def node_count(self) -> int:
        return self.values.shape[0]

    @property
    def input_dim(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]


def make_mask(seed: int, node_count: int, input_dim: int = 1, mode: str = "binary") -> Mask:
    """Draw a deterministic random mask.

    Binary mode draws -1/+1 with equal probability; continuous mode draws
    uniformly from [-1, 1].  The same seed always yields the same mask.
    """
    if node_count < 1:
        raise ValueError(f"node_count must be >= 1, got {node_count}")
    if input_dim < 1:
        raise ValueError(f"input_dim must be >= 1, got {input_dim}")
    if mode not in MASK_MODES:
        raise ValueError(f"mask mode must be one of {MASK_MODES}, got {mode!r}")
    rng = np.random.default_rng(seed)
    shape = (node_count,) if input_dim == 1 else (node_count, input_dim)
    if mode == "binary":
        values = rng.choice((-1.0, 1.0), size=shape)
    else:
        values = rng.uniform(-1.0, 1.0, size=shape)
    return Mask(values=values, mode=mode)


def apply_mask(inputs: np.ndarray, mask: Mask) -> np.ndarray:
    """Turn an input sequence into per-node drives.

    Scalar inputs ``(steps,)`` with a 1-D mask give ``drive[n, i] = m_i * p(n)``.
    Vector inputs ``(steps, input_dim)`` with a matrix mask give
    ``drive[n, i] = sum_j m_ij * p_j(n)``.  Returns ``(steps, node_count)``.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim == 1:
        if mask.values.ndim != 1:
            raise ValueError(
                f"scalar input requires a 1-D mask, got mask shape {mask.values.shape}"
            )
        return np.outer(inputs, mask.values)
    if inputs.ndim == 2:
        if mask.values.ndim != 2 or mask.values.shape[1] != inputs.shape[1]:
            raise ValueError(
                f"input dim {inputs.shape[1]} does not match mask shape {mask.values.shape}"
            )
        return inputs @ mask.values.T
    raise ValueError(f"inputs must be 1-D or 2-D, got shape {inputs.shape}")


def node_update(prev_state: float, drive: float, params: ReservoirParams) -> float:
    """One node update: sin(alpha*prev_state + beta*drive + phi)."""
    if not (np.isfinite(prev_state) and np.isfinite(drive)):
        raise ValueError(f"non-finite node input: prev_state={prev_state!r}, drive={drive!r}")
    # Grouped to match run_reservoir bit-for-bit (it precomputes beta*drive + phi).
    return float(np.sin(params.alpha * prev_state + (params.beta * drive + params.phi)))


def run_reservoir(
    drives: np.ndarray,
    params: ReservoirParams,
    initial_state: np.ndarray | None = None,
    coupling: str = "self",
) -> np.ndarray:
    """Iterate the node update over a drive matrix.

    ``drives`` has shape ``(macro_steps, node_count)``; row ``n`` holds every
    node's drive at macro step ``n``.  Row ``n`` of the result is computed
    element-wise from row ``n-1`` (row -1 is ``initial_state``, default all
    zeros).  With ``coupling="self"`` node ``i`` reads its own previous state,
    so the columns evolve independently; ``coupling="neighbor"`` makes node
    ``i`` read node ``i-1`` (node 0 reads the last node), for comparison only.
    """
    drives = np.asarray(drives, dtype=np.float64)
    if drives.ndim != 2:
        raise ValueError(f"drives must be 2-D (steps, nodes), got shape {drives.shape}")
    if coupling not in COUPLING_MODES:
        raise ValueError(f"coupling must be one of {COUPLING_MODES}, got {coupling!r}")
    steps, nodes = drives.shape
    if nodes < 1:
        raise ValueError("drives must have at least one node column")
    if not np.isfinite(drives).all():
        step, node = np.argwhere(~np.isfinite(drives))[0]
        raise ValueError(f"non-finite drive at step {step}, node {node}")
    if initial_state is None:
        state = np.zeros(nodes)
    else:
        state = np.asarray(initial_state, dtype=np.float64)
        if state.shape != (nodes,):
            raise ValueError(
                f"initial_state must have shape ({nodes},), got {state.shape}"
            )
        if not np.isfinite(state).all():
            raise ValueError("initial_state must be finite")

    states = np.empty((steps, nodes))
    scaled = params.beta * drives + params.phi  # hoisted; the loop only mixes in feedback
    for n in range(steps):
        fed_back = state if coupling == "self" else np.roll(state, 1)
        state = np.sin(params.alpha * fed_back + scaled[n])
        states[n] = state
    return states
