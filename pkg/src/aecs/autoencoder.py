"""Sequence-to-sequence LSTM autoencoder producing compact latent codes.

Two stacked LSTM layers read each series; the second layer's hidden state at
the last observed timestep is the series' latent code.  A mirrored two-layer
LSTM decoder reconstructs the series from that code: the code initializes the
first decoder layer through a learned affine map, is fed to it as input at
every timestep, and a linear readout of the second decoder layer produces the
reconstruction.  Training minimizes mean squared error over observed
timesteps with minibatch gradient descent (momentum optional).

Padding is inert by construction: encoder states freeze past a series' last
observed step (so the latent is the state at that step) and padded positions
are excluded from the loss, which means appending padding changes neither the
latent nor the loss.

Everything is plain numpy with explicit backpropagation through time; the
model is small enough that a hand-rolled implementation stays fast and keeps
runs bit-for-bit reproducible.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .data import TimeSeriesDataset, as_dataset, z_normalize
from .errors import ConfigurationError, DataError, NumericInstabilityError, ShapeError

_CHECKPOINT_VERSION = 1

# Gate slices within the packed weight matrices, in order: input, forget,
# cell candidate, output.
_GATES = ("i", "f", "g", "o")


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass(frozen=True)
class LSTMParams:
    """One LSTM layer's parameters; gates are packed i|f|g|o along columns."""

    w_in: np.ndarray   # (n_inputs, 4 * n_hidden)
    w_rec: np.ndarray  # (n_hidden, 4 * n_hidden)
    bias: np.ndarray   # (4 * n_hidden,)

    @property
    def n_hidden(self) -> int:
        return self.w_rec.shape[0]


@dataclass(frozen=True)
class AutoencoderModel:
    """Full parameter set plus the dimensions that define the architecture."""

    encoder1: LSTMParams
    encoder2: LSTMParams
    decoder1: LSTMParams
    decoder2: LSTMParams
    latent_map_w: np.ndarray  # (hidden2, hidden1), latent -> decoder1 h0
    latent_map_b: np.ndarray  # (hidden1,)
    readout_w: np.ndarray     # (hidden2, n_dims)
    readout_b: np.ndarray     # (n_dims,)
    n_dims: int
    hidden1: int
    hidden2: int
    seed: int

    def parameters(self) -> list[tuple[str, np.ndarray]]:
        """All parameter arrays in a fixed, documented order."""
        out = []
        for name, block in (
            ("encoder1", self.encoder1),
            ("encoder2", self.encoder2),
            ("decoder1", self.decoder1),
            ("decoder2", self.decoder2),
        ):
            out.append((f"{name}.w_in", block.w_in))
            out.append((f"{name}.w_rec", block.w_rec))
            out.append((f"{name}.bias", block.bias))
        out.append(("latent_map.w", self.latent_map_w))
        out.append(("latent_map.b", self.latent_map_b))
        out.append(("readout.w", self.readout_w))
        out.append(("readout.b", self.readout_b))
        return out

    @property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.n_dims, self.hidden1, self.hidden2, self.seed)).encode())
        for name, arr in self.parameters():
            h.update(name.encode())
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class LatentMatrix:
    """Latent codes for a dataset, one row per series."""

    values: np.ndarray
    model_fingerprint: str

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if values.ndim != 2:
            raise ShapeError(f"latent matrix must be 2-d, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for :func:`train`."""

    epochs: int = 30
    batch_size: int = 32
    learning_rate: float = 0.004
    momentum: float = 0.0
    seed: int = 0
    clip_norm: float | None = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.learning_rate >= 0:
            raise ConfigurationError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigurationError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.clip_norm is not None and not self.clip_norm > 0:
            raise ConfigurationError(f"clip_norm must be positive, got {self.clip_norm}")


@dataclass(frozen=True)
class TrainTrace:
    """Per-epoch mean training loss and wall time."""

    epoch_losses: tuple[float, ...]
    epoch_seconds: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "epoch_losses": list(self.epoch_losses),
            "epoch_seconds": list(self.epoch_seconds),
        }


def _expected_shapes(n_dims: int, hidden1: int, hidden2: int) -> dict[str, tuple]:
    def block(n_in, n_hidden, name):
        return {
            f"{name}.w_in": (n_in, 4 * n_hidden),
            f"{name}.w_rec": (n_hidden, 4 * n_hidden),
            f"{name}.bias": (4 * n_hidden,),
        }

    shapes: dict[str, tuple] = {}
    shapes.update(block(n_dims, hidden1, "encoder1"))
    shapes.update(block(hidden1, hidden2, "encoder2"))
    shapes.update(block(hidden2, hidden1, "decoder1"))
    shapes.update(block(hidden1, hidden2, "decoder2"))
    shapes["latent_map.w"] = (hidden2, hidden1)
    shapes["latent_map.b"] = (hidden1,)
    shapes["readout.w"] = (hidden2, n_dims)
    shapes["readout.b"] = (n_dims,)
    return shapes


def _model_from_params(params: dict[str, np.ndarray], n_dims, hidden1, hidden2, seed,
                       freeze: bool = True) -> AutoencoderModel:
    def block(name):
        return LSTMParams(
            w_in=params[f"{name}.w_in"],
            w_rec=params[f"{name}.w_rec"],
            bias=params[f"{name}.bias"],
        )

    if freeze:
        for arr in params.values():
            arr.setflags(write=False)
    return AutoencoderModel(
        encoder1=block("encoder1"),
        encoder2=block("encoder2"),
        decoder1=block("decoder1"),
        decoder2=block("decoder2"),
        latent_map_w=params["latent_map.w"],
        latent_map_b=params["latent_map.b"],
        readout_w=params["readout.w"],
        readout_b=params["readout.b"],
        n_dims=n_dims,
        hidden1=hidden1,
        hidden2=hidden2,
        seed=seed,
    )


def init_model(n_dims: int, hidden1: int = 16, hidden2: int = 12, seed: int = 0) -> AutoencoderModel:
    """Create a model with Glorot-uniform weights.

    Biases start at zero except the forget gates, which start at one so early
    training does not wipe the cell state.  The latent width ``hidden2`` must
    be strictly smaller than ``hidden1`` to keep the code undercomplete.
    """
    if n_dims < 1:
        raise ConfigurationError(f"n_dims must be >= 1, got {n_dims}")
    if not 1 <= hidden2 < hidden1:
        raise ConfigurationError(
            f"need 1 <= hidden2 < hidden1, got hidden1={hidden1}, hidden2={hidden2}"
        )
    rng = np.random.default_rng(seed)

    def glorot(shape):
        bound = np.sqrt(6.0 / (shape[0] + shape[1]))
        return rng.uniform(-bound, bound, size=shape)

    def lstm(n_in, n_hidden):
        # Draw order (w_in then w_rec per layer) is part of the seeding
        # contract; changing it changes every seeded model.
        w_in = glorot((n_in, 4 * n_hidden))
        w_rec = glorot((n_hidden, 4 * n_hidden))
        bias = np.zeros(4 * n_hidden)
        bias[n_hidden : 2 * n_hidden] = 1.0
        return LSTMParams(w_in=w_in, w_rec=w_rec, bias=bias)

    params: dict[str, np.ndarray] = {}
    for name, n_in, n_hidden in (
        ("encoder1", n_dims, hidden1),
        ("encoder2", hidden1, hidden2),
        ("decoder1", hidden2, hidden1),
        ("decoder2", hidden1, hidden2),
    ):
        block = lstm(n_in, n_hidden)
        params[f"{name}.w_in"] = block.w_in
        params[f"{name}.w_rec"] = block.w_rec
        params[f"{name}.bias"] = block.bias
    params["latent_map.w"] = glorot((hidden2, hidden1))
    params["latent_map.b"] = np.zeros(hidden1)
    params["readout.w"] = glorot((hidden2, n_dims))
    params["readout.b"] = np.zeros(n_dims)
    return _model_from_params(params, n_dims, hidden1, hidden2, seed)


def _step(p: LSTMParams, x: np.ndarray, h: np.ndarray, c: np.ndarray):
    """One LSTM timestep; returns (h_new, c_new, gate cache)."""
    n_hidden = p.n_hidden
    z = x @ p.w_in + h @ p.w_rec + p.bias
    gi = _sigmoid(z[:, :n_hidden])
    gf = _sigmoid(z[:, n_hidden : 2 * n_hidden])
    gg = np.tanh(z[:, 2 * n_hidden : 3 * n_hidden])
    go = _sigmoid(z[:, 3 * n_hidden :])
    c_new = gf * c + gi * gg
    tc = np.tanh(c_new)
    h_new = go * tc
    return h_new, c_new, (gi, gf, gg, go, tc)


def _lstm_forward(p: LSTMParams, inputs: np.ndarray, mask: np.ndarray | None,
                  h0: np.ndarray | None = None, want_cache: bool = False):
    """Run a layer over time-major ``inputs`` of shape (n, batch, n_in).

    ``mask`` (n, batch) freezes hidden and cell state at padded steps.  The
    initial hidden state may be supplied; the cell state always starts at 0.
    Returns the post-freeze hidden sequence, the final (h, c) and, when
    requested, the cache needed for backpropagation.
    """
    n, batch, _ = inputs.shape
    n_hidden = p.n_hidden
    h = np.zeros((batch, n_hidden)) if h0 is None else h0
    c = np.zeros((batch, n_hidden))
    h_seq = np.empty((n, batch, n_hidden))
    cache = None
    if want_cache:
        cache = {
            "inputs": inputs,
            "mask": mask,
            "pre_h": np.empty((n, batch, n_hidden)),
            "pre_c": np.empty((n, batch, n_hidden)),
            "gates": np.empty((4, n, batch, n_hidden)),
            "tanh_c": np.empty((n, batch, n_hidden)),
        }
    for t in range(n):
        if want_cache:
            cache["pre_h"][t] = h
            cache["pre_c"][t] = c
        h_new, c_new, (gi, gf, gg, go, tc) = _step(p, inputs[t], h, c)
        if mask is None:
            h, c = h_new, c_new
        else:
            keep = mask[t][:, None]
            h = np.where(keep, h_new, h)
            c = np.where(keep, c_new, c)
        h_seq[t] = h
        if want_cache:
            cache["gates"][0, t] = gi
            cache["gates"][1, t] = gf
            cache["gates"][2, t] = gg
            cache["gates"][3, t] = go
            cache["tanh_c"][t] = tc
    return h_seq, (h, c), cache


def _lstm_backward(p: LSTMParams, cache: dict, d_hseq: np.ndarray):
    """Backpropagate through :func:`_lstm_forward`.

    ``d_hseq[t]`` is the upstream gradient on the post-freeze hidden state at
    step ``t`` (gradients on the final state should be added into the last
    slot).  Returns gradients on the inputs, the parameter gradients and the
    gradient on the initial hidden state.
    """
    inputs, mask = cache["inputs"], cache["mask"]
    n, batch, _ = inputs.shape
    n_hidden = p.n_hidden
    gates, tanh_c = cache["gates"], cache["tanh_c"]
    pre_h, pre_c = cache["pre_h"], cache["pre_c"]

    g_w_in = np.zeros_like(p.w_in)
    g_w_rec = np.zeros_like(p.w_rec)
    g_bias = np.zeros_like(p.bias)
    d_inputs = np.empty_like(inputs)
    carry_h = np.zeros((batch, n_hidden))
    carry_c = np.zeros((batch, n_hidden))
    dz = np.empty((batch, 4 * n_hidden))
    for t in range(n - 1, -1, -1):
        dh = d_hseq[t] + carry_h
        dc = carry_c
        if mask is None:
            dh_new, dc_new = dh, dc
            carry_h = np.zeros_like(dh)
            carry_c = np.zeros_like(dc)
        else:
            keep = mask[t][:, None]
            dh_new = np.where(keep, dh, 0.0)
            dc_new = np.where(keep, dc, 0.0)
            carry_h = np.where(keep, 0.0, dh)
            carry_c = np.where(keep, 0.0, dc)
        gi, gf, gg, go = gates[0, t], gates[1, t], gates[2, t], gates[3, t]
        tc = tanh_c[t]
        d_out = dh_new * tc
        d_cell = dc_new + dh_new * go * (1.0 - tc * tc)
        d_in_gate = d_cell * gg
        d_forget = d_cell * pre_c[t]
        d_cand = d_cell * gi
        dz[:, :n_hidden] = d_in_gate * gi * (1.0 - gi)
        dz[:, n_hidden : 2 * n_hidden] = d_forget * gf * (1.0 - gf)
        dz[:, 2 * n_hidden : 3 * n_hidden] = d_cand * (1.0 - gg * gg)
        dz[:, 3 * n_hidden :] = d_out * go * (1.0 - go)
        g_w_in += inputs[t].T @ dz
        g_w_rec += pre_h[t].T @ dz
        g_bias += dz.sum(axis=0)
        d_inputs[t] = dz @ p.w_in.T
        carry_h = carry_h + dz @ p.w_rec.T
        carry_c = carry_c + d_cell * gf
    return d_inputs, (g_w_in, g_w_rec, g_bias), carry_h


def _check_input(model: AutoencoderModel, ds: TimeSeriesDataset) -> None:
    if ds.n_dims != model.n_dims:
        raise ShapeError(
            f"dataset has {ds.n_dims} dimensions per series but the model expects {model.n_dims}"
        )


def _encode(model: AutoencoderModel, values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Latent codes for a (batch, n, d) block; both layers in one time loop."""
    batch, n, _ = values.shape
    h1 = np.zeros((batch, model.hidden1))
    c1 = np.zeros((batch, model.hidden1))
    h2 = np.zeros((batch, model.hidden2))
    c2 = np.zeros((batch, model.hidden2))
    for t in range(n):
        keep = mask[:, t][:, None]
        h1_new, c1_new, _ = _step(model.encoder1, values[:, t, :], h1, c1)
        h1 = np.where(keep, h1_new, h1)
        c1 = np.where(keep, c1_new, c1)
        h2_new, c2_new, _ = _step(model.encoder2, h1, h2, c2)
        h2 = np.where(keep, h2_new, h2)
        c2 = np.where(keep, c2_new, c2)
    return h2


def _decode(model: AutoencoderModel, latent: np.ndarray, n: int) -> np.ndarray:
    """Reconstruction of ``n`` timesteps from latent codes, shape (batch, n, d)."""
    batch = latent.shape[0]
    h1 = latent @ model.latent_map_w + model.latent_map_b
    c1 = np.zeros((batch, model.hidden1))
    h2 = np.zeros((batch, model.hidden2))
    c2 = np.zeros((batch, model.hidden2))
    recon = np.empty((batch, n, model.n_dims))
    for t in range(n):
        h1, c1, _ = _step(model.decoder1, latent, h1, c1)
        h2, c2, _ = _step(model.decoder2, h1, h2, c2)
        recon[:, t, :] = h2 @ model.readout_w + model.readout_b
    return recon


def forward(model: AutoencoderModel, ds: TimeSeriesDataset) -> tuple[np.ndarray, np.ndarray]:
    """Encode and reconstruct a dataset.

    Returns ``(reconstruction, latent)`` with shapes (n_series, n_timesteps,
    n_dims) and (n_series, hidden2).  Reconstructions at padded positions are
    produced but carry no meaning; the loss ignores them.
    """
    _check_input(model, ds)
    latent = _encode(model, ds.values, ds.mask)
    recon = _decode(model, latent, ds.n_timesteps)
    return recon, latent


def masked_mse(recon: np.ndarray, values: np.ndarray, mask: np.ndarray) -> float:
    """Mean squared error over observed positions only.

    Summation runs over each series' observed slice, so appending padded
    timesteps leaves the result bit-for-bit unchanged.
    """
    se, obs = _loss_terms(recon, values, mask)
    return float(se.sum() / obs)


def _loss_terms(recon, values, mask) -> tuple[np.ndarray, float]:
    batch = values.shape[0]
    se = np.empty(batch)
    for i in range(batch):
        diff = (recon[i] - values[i])[mask[i]].ravel()
        se[i] = diff @ diff
    return se, float(mask.sum() * values.shape[2])


def reconstruction_loss(model: AutoencoderModel, ds: TimeSeriesDataset) -> float:
    """Masked MSE of the model's reconstruction of ``ds``."""
    recon, _ = forward(model, ds)
    return masked_mse(recon, ds.values, ds.mask)


def _loss_and_grads(model: AutoencoderModel, values: np.ndarray, mask: np.ndarray):
    """Loss, per-series squared errors and parameter gradients for one batch."""
    batch, n, _ = values.shape
    x = np.ascontiguousarray(values.transpose(1, 0, 2))
    msk = np.ascontiguousarray(mask.T)

    h1_seq, _, cache1 = _lstm_forward(model.encoder1, x, msk, want_cache=True)
    h2_seq, (latent, _), cache2 = _lstm_forward(model.encoder2, h1_seq, msk, want_cache=True)
    dec_h0 = latent @ model.latent_map_w + model.latent_map_b
    dec_in = np.broadcast_to(latent, (n, batch, model.hidden2))
    d1_seq, _, cache3 = _lstm_forward(model.decoder1, dec_in, None, h0=dec_h0, want_cache=True)
    d2_seq, _, cache4 = _lstm_forward(model.decoder2, d1_seq, None, want_cache=True)
    recon_t = d2_seq @ model.readout_w + model.readout_b

    recon = recon_t.transpose(1, 0, 2)
    se, obs = _loss_terms(recon, values, mask)
    loss = float(se.sum() / obs)

    d_recon_t = (2.0 / obs) * (recon_t - x) * msk[:, :, None]
    grads: dict[str, np.ndarray] = {}
    grads["readout.w"] = np.einsum("nbh,nbd->hd", d2_seq, d_recon_t)
    grads["readout.b"] = d_recon_t.sum(axis=(0, 1))

    d_d2 = d_recon_t @ model.readout_w.T
    d_d1, (gw, gr, gb), _ = _lstm_backward(model.decoder2, cache4, d_d2)
    grads["decoder2.w_in"], grads["decoder2.w_rec"], grads["decoder2.bias"] = gw, gr, gb

    d_decin, (gw, gr, gb), d_dech0 = _lstm_backward(model.decoder1, cache3, d_d1)
    grads["decoder1.w_in"], grads["decoder1.w_rec"], grads["decoder1.bias"] = gw, gr, gb

    d_latent = d_decin.sum(axis=0) + d_dech0 @ model.latent_map_w.T
    grads["latent_map.w"] = latent.T @ d_dech0
    grads["latent_map.b"] = d_dech0.sum(axis=0)

    d_h2seq = np.zeros_like(h2_seq)
    d_h2seq[n - 1] = d_latent
    d_h1seq, (gw, gr, gb), _ = _lstm_backward(model.encoder2, cache2, d_h2seq)
    grads["encoder2.w_in"], grads["encoder2.w_rec"], grads["encoder2.bias"] = gw, gr, gb

    _, (gw, gr, gb), _ = _lstm_backward(model.encoder1, cache1, d_h1seq)
    grads["encoder1.w_in"], grads["encoder1.w_rec"], grads["encoder1.bias"] = gw, gr, gb
    return loss, se, grads


def train(model: AutoencoderModel, ds: TimeSeriesDataset,
          config: TrainConfig | None = None) -> tuple[AutoencoderModel, TrainTrace]:
    """Train a copy of ``model`` on ``ds``; the input model is not modified.

    Minibatch SGD with classical momentum (velocity = momentum * velocity +
    gradient).  Series are reshuffled every epoch from the config seed, and
    the per-epoch loss is the mean batch loss weighted by observed count, so
    it does not depend on how the shuffle grouped the series.  Raises
    NumericInstabilityError as soon as a batch loss is non-finite.
    """
    if config is None:
        config = TrainConfig()
    _check_input(model, ds)
    params = {name: arr.copy() for name, arr in model.parameters()}
    velocity = {name: np.zeros_like(arr) for name, arr in params.items()}
    work = _model_from_params(
        params, model.n_dims, model.hidden1, model.hidden2, model.seed, freeze=False
    )
    rng = np.random.default_rng(config.seed)
    m = ds.n_series
    total_obs = float(ds.mask.sum() * ds.n_dims)
    losses = []
    seconds = []
    for epoch in range(config.epochs):
        started = time.perf_counter()
        order = rng.permutation(m)
        sq_errors = np.zeros(m)
        for batch_index, start in enumerate(range(0, m, config.batch_size)):
            idx = order[start : start + config.batch_size]
            loss, se, grads = _loss_and_grads(work, ds.values[idx], ds.mask[idx])
            if not np.isfinite(loss):
                raise NumericInstabilityError(
                    f"non-finite training loss at epoch {epoch + 1}, batch {batch_index + 1}"
                )
            sq_errors[idx] = se
            if config.clip_norm is not None:
                norm = np.sqrt(sum(float((g * g).sum()) for g in grads.values()))
                if norm > config.clip_norm:
                    scale = config.clip_norm / norm
                    for g in grads.values():
                        g *= scale
            for name, g in grads.items():
                v = velocity[name]
                v *= config.momentum
                v += g
                params[name] -= config.learning_rate * v
        losses.append(float(sq_errors.sum() / total_obs))
        seconds.append(time.perf_counter() - started)
    for arr in params.values():
        if not np.isfinite(arr).all():
            raise NumericInstabilityError("non-finite parameters after training")
    trained = _model_from_params(
        {name: arr.copy() for name, arr in params.items()},
        model.n_dims, model.hidden1, model.hidden2, model.seed,
    )
    return trained, TrainTrace(epoch_losses=tuple(losses), epoch_seconds=tuple(seconds))


def extract_aecs(model: AutoencoderModel, ds: TimeSeriesDataset) -> LatentMatrix:
    """Latent code matrix (n_series, hidden2) for a dataset."""
    _check_input(model, ds)
    latent = _encode(model, ds.values, ds.mask)
    return LatentMatrix(values=latent, model_fingerprint=model.fingerprint)


def save_model(model: AutoencoderModel, path) -> None:
    """Write a checkpoint; float64 parameters round-trip bit-exactly."""
    arrays = {f"param:{name}": arr for name, arr in model.parameters()}
    np.savez(
        path,
        format_version=np.int64(_CHECKPOINT_VERSION),
        n_dims=np.int64(model.n_dims),
        hidden1=np.int64(model.hidden1),
        hidden2=np.int64(model.hidden2),
        seed=np.int64(model.seed),
        **arrays,
    )


def load_model(path) -> AutoencoderModel:
    """Load a checkpoint written by :func:`save_model`."""
    try:
        with np.load(path) as blob:
            data = {key: blob[key] for key in blob.files}
    except (OSError, ValueError) as exc:
        raise DataError(f"cannot read checkpoint {path}: {exc}") from None
    for key in ("format_version", "n_dims", "hidden1", "hidden2", "seed"):
        if key not in data:
            raise DataError(f"checkpoint {path} is missing field {key!r}")
    version = int(data["format_version"])
    if version != _CHECKPOINT_VERSION:
        raise DataError(
            f"checkpoint {path} has format version {version}, expected {_CHECKPOINT_VERSION}"
        )
    n_dims, hidden1, hidden2 = (int(data[k]) for k in ("n_dims", "hidden1", "hidden2"))
    shapes = _expected_shapes(n_dims, hidden1, hidden2)
    params: dict[str, np.ndarray] = {}
    for name, shape in shapes.items():
        key = f"param:{name}"
        if key not in data:
            raise DataError(f"checkpoint {path} is missing parameter {name!r}")
        arr = np.asarray(data[key], dtype=np.float64)
        if arr.shape != shape:
            raise DataError(
                f"checkpoint {path}: parameter {name!r} has shape {arr.shape}, expected {shape}"
            )
        params[name] = arr.copy()
    return _model_from_params(params, n_dims, hidden1, hidden2, int(data["seed"]))


class SequenceAutoencoder(BaseEstimator, TransformerMixin):
    """Scikit-learn style transformer from padded series to latent codes.

    ``fit`` accepts a :class:`TimeSeriesDataset` or an array of shape
    (n_series, n_timesteps) or (n_series, n_timesteps, n_dims); trailing NaNs
    mark padding when ``lengths`` is not given.  ``transform`` returns the
    latent matrix.

    Parameters mirror :class:`TrainConfig` plus the architecture widths.
    With ``normalize=True`` (the default) every series is z-normalized before
    training and before encoding, which is what the training objective
    assumes.

    Attributes
    ----------
    model_ : AutoencoderModel
    trace_ : TrainTrace
    """

    def __init__(self, hidden1: int = 16, hidden2: int = 12, epochs: int = 30,
                 batch_size: int = 32, learning_rate: float = 0.004,
                 momentum: float = 0.0, clip_norm: float | None = None,
                 normalize: bool = True, seed: int = 0):
        self.hidden1 = hidden1
        self.hidden2 = hidden2
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.clip_norm = clip_norm
        self.normalize = normalize
        self.seed = seed

    def _prepare(self, x, lengths) -> TimeSeriesDataset:
        ds = as_dataset(x, lengths=lengths)
        return z_normalize(ds) if self.normalize else ds

    def fit(self, X, y=None, lengths=None):
        ds = self._prepare(X, lengths)
        model = init_model(ds.n_dims, hidden1=self.hidden1, hidden2=self.hidden2, seed=self.seed)
        config = TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            seed=self.seed,
            clip_norm=self.clip_norm,
        )
        self.model_, self.trace_ = train(model, ds, config)
        return self

    def transform(self, X, lengths=None) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise ConfigurationError("this SequenceAutoencoder is not fitted yet")
        ds = self._prepare(X, lengths)
        return extract_aecs(self.model_, ds).values.copy()

    def fit_transform(self, X, y=None, lengths=None) -> np.ndarray:
        return self.fit(X, y=y, lengths=lengths).transform(X, lengths=lengths)
