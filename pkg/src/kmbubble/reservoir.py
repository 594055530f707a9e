"""Reservoir computing: virtual-neuron harvesting, ridge readout,
short-term-memory and parity-check capacities, and a reference echo
state network for cross-validating the readout machinery."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .analysis import pearson_r2
from .errors import DomainError
from .solver import Trajectory


@dataclass(frozen=True)
class EsnConfig:
    n_reservoir: int
    n_input: int = 1
    leak: float = 1.0
    spectral_radius: float = 0.9
    input_scale: float = 1.0
    density: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_reservoir < 1:
            raise DomainError("n_reservoir must be >= 1")
        if not 0.0 < self.leak <= 1.0:
            raise DomainError("leak must be in (0, 1]")
        if not 0.0 < self.density <= 1.0:
            raise DomainError("density must be in (0, 1]")


@dataclass(frozen=True)
class EsnWeights:
    w_in: np.ndarray  # n_reservoir x n_input
    w: np.ndarray     # n_reservoir x n_reservoir


@dataclass(frozen=True)
class ReadoutModel:
    w_out: np.ndarray  # outputs x features
    beta: float


@dataclass(frozen=True)
class CapacityReport:
    """Per-delay squared correlations; capacity sums delays 1..k_max."""

    delays: np.ndarray
    r2: np.ndarray
    capacity: float
    task: str


def init_esn_weights(config: EsnConfig) -> EsnWeights:
    """Random ESN weights: uniform entries masked to the requested density,
    recurrent matrix rescaled to the target spectral radius."""
    rng = np.random.default_rng(config.seed)
    w_in = rng.uniform(-config.input_scale, config.input_scale,
                       (config.n_reservoir, config.n_input))
    w = rng.uniform(-1.0, 1.0, (config.n_reservoir, config.n_reservoir))
    if config.density < 1.0:
        mask = rng.random(w.shape) < config.density
        w = w * mask
    radius = np.max(np.abs(np.linalg.eigvals(w)))
    if radius > 0:
        w = w * (config.spectral_radius / radius)
    return EsnWeights(w_in, w)


def esn_update(x_prev, u, weights: EsnWeights, leak=1.0,
               activation: Callable = np.tanh):
    """One reservoir step: x = (1 - leak) x_prev + leak act(W_in u + W x_prev)."""
    x_prev = np.asarray(x_prev, dtype=float)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if x_prev.shape[0] != weights.w.shape[0] or u.shape[0] != weights.w_in.shape[1]:
        raise DomainError("state/input dimensions do not match the weights")
    return (1.0 - leak) * x_prev + leak * activation(weights.w_in @ u + weights.w @ x_prev)


def run_esn(inputs, weights: EsnWeights, leak=1.0,
            activation: Callable = np.tanh) -> np.ndarray:
    """Drive the ESN over an input sequence and return the bias-augmented
    state matrix [1; u_n; x_n] with one column per step."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    if inputs.shape[0] != weights.w_in.shape[1]:
        inputs = inputs.T
    n_u, n_steps = inputs.shape
    n_x = weights.w.shape[0]
    x = np.zeros(n_x)
    cols = np.empty((1 + n_u + n_x, n_steps))
    for n in range(n_steps):
        x = esn_update(x, inputs[:, n], weights, leak, activation)
        cols[0, n] = 1.0
        cols[1:1 + n_u, n] = inputs[:, n]
        cols[1 + n_u:, n] = x
    return cols


def delay_line_weights(depth: int) -> EsnWeights:
    """Shift-register reservoir: with identity activation and leak 1 the
    state holds the last `depth` inputs exactly."""
    w = np.zeros((depth, depth))
    w[np.arange(1, depth), np.arange(depth - 1)] = 1.0
    w_in = np.zeros((depth, 1))
    w_in[0, 0] = 1.0
    return EsnWeights(w_in, w)


def harvest_virtual_neurons(traj: Trajectory, bits, slot_tau: float,
                            n_virtual: int) -> np.ndarray:
    """Time-multiplex the scattered pressure into virtual neurons.

    Each symbol slot contributes n_virtual equally spaced samples of
    p_scat; the returned state matrix has rows [1; u_n; x_n] and one
    column per symbol.
    """
    bits = np.asarray(bits, dtype=float)
    if n_virtual < 1:
        raise DomainError("n_virtual must be >= 1")
    if slot_tau <= 0:
        raise DomainError("slot_tau must be positive")
    dtau = traj.dtau
    n_slot = int(round(slot_tau / dtau))
    if n_slot < n_virtual:
        raise DomainError("slot too short for the requested number of neurons")
    needed = bits.size * n_slot
    if needed > traj.p_scat.size:
        raise DomainError("trajectory does not cover all symbol slots")

    offsets = ((np.arange(n_virtual) + 0.5) * n_slot / n_virtual).astype(int)
    starts = np.arange(bits.size) * n_slot
    sample_idx = starts[:, None] + offsets[None, :]

    x = np.empty((1 + 1 + n_virtual, bits.size))
    x[0] = 1.0
    x[1] = bits
    x[2:] = traj.p_scat[sample_idx].T
    return x


def train_readout(x, y_target, beta: float) -> ReadoutModel:
    """Ridge readout W_out = Y X^T (X X^T + beta I)^-1."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y_target, dtype=float))
    if x.shape[1] != y.shape[1]:
        raise DomainError("state and target matrices must have equal column counts")
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    gram = x @ x.T + beta * np.eye(x.shape[0])
    if beta == 0.0 and np.linalg.cond(gram) > 1e12:
        raise DomainError("X X^T is singular at beta = 0; use beta > 0")
    w_out = np.linalg.solve(gram, (y @ x.T).T).T
    return ReadoutModel(w_out, beta)


def predict(model: ReadoutModel, x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[0] != model.w_out.shape[1]:
        raise DomainError("feature dimension does not match the readout")
    return model.w_out @ x


def parity_target(bits, k: int) -> np.ndarray:
    """3-bit parity of delayed inputs: u[n-k] ^ u[n-k-1] ^ u[n-k-2],
    defined for n >= k + 2."""
    bits = np.asarray(bits, dtype=int)
    if k < 0:
        raise DomainError("delay must be nonnegative")
    if bits.size < k + 3:
        raise DomainError("sequence shorter than k + 3")
    n = np.arange(k + 2, bits.size)
    return bits[n - k] ^ bits[n - k - 1] ^ bits[n - k - 2]


def _capacity(bits, x, beta, k_max, target_for_delay, min_offset, task) -> CapacityReport:
    bits = np.asarray(bits, dtype=int)
    n = bits.size
    if x.shape[1] != n:
        raise DomainError("state matrix must have one column per bit")
    half = n // 2
    if k_max < 1 or k_max + min_offset >= half:
        raise DomainError("k_max too large for the available sequence length")

    r2 = np.empty(k_max + 1)
    for k in range(k_max + 1):
        start = k + min_offset
        y = target_for_delay(k)  # y[i] is the target for symbol index start + i
        cols = np.arange(start, n)
        tr = cols[cols < half]
        te = cols[cols >= half]
        model = train_readout(x[:, tr], y[tr - start], beta)
        pred = predict(model, x[:, te])[0]
        truth = y[te - start]
        r2[k] = pearson_r2(truth, pred) if np.std(truth) > 0 else 0.0
    return CapacityReport(np.arange(k_max + 1), r2, float(np.sum(r2[1:])), task)


def stm_capacity(bits, x, beta=1e-8, k_max=15) -> CapacityReport:
    """Short-term memory capacity: recall of u[n-k], summed over k = 1..k_max.

    Readouts are trained on the first half of the symbols and scored
    (squared Pearson correlation) on the second half.
    """
    bits_arr = np.asarray(bits, dtype=int)
    return _capacity(bits_arr, np.atleast_2d(x), beta, k_max,
                     lambda k: bits_arr[:bits_arr.size - k] if k else bits_arr,
                     0, "stm")


def pc_capacity(bits, x, beta=1e-8, k_max=15) -> CapacityReport:
    """Parity-check capacity: same protocol with the 3-bit parity target."""
    bits_arr = np.asarray(bits, dtype=int)
    return _capacity(bits_arr, np.atleast_2d(x), beta, k_max,
                     lambda k: parity_target(bits_arr, k),
                     2, "pc")


def write_capacity_csv(stm: CapacityReport, pc: CapacityReport, path):
    """CSV with columns k, r2_stm, r2_pc plus a trailing summary line."""
    with open(path, "w") as fh:
        fh.write("k,r2_stm,r2_pc\n")
        for k, a, b in zip(stm.delays, stm.r2, pc.r2):
            fh.write(f"{k},{a:.6f},{b:.6f}\n")
        fh.write(f"# C_STM={stm.capacity:.4f} bits C_PC={pc.capacity:.4f} bits\n")
