"""Graph neural model predicting one graph edit per buggy graph.

Architecture: node states start from kind + value embeddings, pass through L
rounds of typed message passing (mean aggregation per edge type and
direction, tanh update), and pool into a graph vector (per-layer max over
nodes, averaged over the L+1 layers). Four factored heads score the edit:
location over nodes, operation, node kind, and value token, each conditioned
on the graph vector and the located node's final state. Training minimizes
the summed cross-entropy of the gold factors.
"""

from __future__ import annotations

import json
import struct
from dataclasses import asdict, dataclass

import numpy as np

from ..graphs import UNKNOWN_VALUE, CodeGraph, IndexedEdit, Vocabulary
from . import autodiff as ad
from . import kernels

OPS = ("ADD_NODE", "DEL_NODE", "REP_TYPE", "REP_VAL")
OP_INDEX = {op: i for i, op in enumerate(OPS)}

_KIND_OPS = ("ADD_NODE", "REP_TYPE")
_VALUE_OPS = ("ADD_NODE", "REP_VAL")

INIT_SCALE = 0.1  # parameters start uniform in [-0.1, 0.1]

CHECKPOINT_MAGIC = b"SRCKPT01"


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class ModelConfig:
    embedding_dim: int = 64
    layers: int = 4
    learning_rate: float = 0.001
    dropout: float = 0.1
    batch_size: int = 10
    epochs: int = 50
    seed: int = 0
    edit_steps: int = 1

    def __post_init__(self):
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.edit_steps < 1:
            raise ValueError("edit_steps must be >= 1")


_RELATIONS = [
    ("AstChild", "fwd"),
    ("AstChild", "bwd"),
    ("SuccToken", "fwd"),
    ("SuccToken", "bwd"),
    ("ValueLink", "fwd"),
    ("ValueLink", "bwd"),
]


def param_shapes(vocab: Vocabulary, config: ModelConfig) -> dict[str, tuple]:
    d = config.embedding_dim
    nk, nv = len(vocab.kinds), len(vocab.values)
    shapes = {"kind_emb": (nk, d), "value_emb": (nv, d)}
    for layer in range(config.layers):
        shapes[f"U{layer}"] = (d, d)
        for etype, direction in _RELATIONS:
            shapes[f"W{layer}_{etype}_{direction}"] = (d, d)
    shapes["loc_A"] = (d, d)
    for head, width in (("op", len(OPS)), ("kind", nk), ("value", nv)):
        shapes[f"{head}_W1"] = (2 * d, d)
        shapes[f"{head}_b1"] = (d,)
        shapes[f"{head}_W2"] = (d, width)
        shapes[f"{head}_b2"] = (width,)
    return shapes


def init_params(vocab: Vocabulary, config: ModelConfig) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(config.seed)
    return {
        name: rng.uniform(-INIT_SCALE, INIT_SCALE, size=shape)
        for name, shape in sorted(param_shapes(vocab, config).items())
    }


def _graph_relations(graph: CodeGraph):
    """Cached (src, dst, counts) arrays for each directed relation."""
    cached = getattr(graph, "_relations", None)
    if cached is not None:
        return cached
    n = graph.n_nodes
    out = []
    for etype, direction in _RELATIONS:
        pairs = graph.edges[etype]
        src = pairs[:, 0] if direction == "fwd" else pairs[:, 1]
        dst = pairs[:, 1] if direction == "fwd" else pairs[:, 0]
        src = np.ascontiguousarray(src, dtype=np.int64)
        dst = np.ascontiguousarray(dst, dtype=np.int64)
        counts = kernels.edge_counts(dst, n)
        out.append((src, dst, counts))
    graph._relations = out
    return out


class _Forward:
    """One forward pass; wraps parameter arrays in autodiff leaves on demand."""

    def __init__(self, params, config: ModelConfig, training=False, rng=None):
        self.params = params
        self.config = config
        self.training = training
        self.rng = rng
        self.tensors: dict[str, ad.Tensor] = {}

    def p(self, name: str) -> ad.Tensor:
        if name not in self.tensors:
            self.tensors[name] = ad.leaf(self.params[name])
        return self.tensors[name]

    def _dropout(self, x: ad.Tensor) -> ad.Tensor:
        p = self.config.dropout
        if not self.training or p == 0.0:
            return x
        mask = (self.rng.random(x.data.shape) >= p) / (1.0 - p)
        return ad.mul_const(x, mask)

    def embed(self, graph: CodeGraph):
        """Returns (graph vector, final node matrix)."""
        value_idx = np.where(graph.value_ids >= 0, graph.value_ids, 0)
        value_mask = (graph.value_ids >= 0).astype(np.float64)[:, None]
        h = ad.add(
            ad.gather_rows(self.p("kind_emb"), graph.kind_ids),
            ad.mul_const(ad.gather_rows(self.p("value_emb"), value_idx), value_mask),
        )
        layer_states = [h]
        relations = _graph_relations(graph)
        n = graph.n_nodes
        for layer in range(self.config.layers):
            terms = [ad.matmul(h, self.p(f"U{layer}"))]
            for (etype, direction), (src, dst, counts) in zip(_RELATIONS, relations):
                mean = ad.segment_mean(h, src, dst, counts, n)
                terms.append(ad.matmul(mean, self.p(f"W{layer}_{etype}_{direction}")))
            h = self._dropout(ad.tanh(ad.add_all(terms)))
            layer_states.append(h)
        graph_vec = ad.mean_all([ad.max_over_rows(state) for state in layer_states])
        return graph_vec, h

    def location_logp(self, graph_vec, node_mat) -> ad.Tensor:
        query = ad.matmul(self.p("loc_A"), graph_vec)
        return ad.log_softmax(ad.matmul(node_mat, query))

    def head_logp(self, name: str, z: ad.Tensor) -> ad.Tensor:
        hidden = ad.tanh(ad.add(ad.matmul(z, self.p(f"{name}_W1")), self.p(f"{name}_b1")))
        hidden = self._dropout(hidden)
        logits = ad.add(ad.matmul(hidden, self.p(f"{name}_W2")), self.p(f"{name}_b2"))
        return ad.log_softmax(logits)


@dataclass
class EditDistribution:
    location: np.ndarray  # log-probs over graph nodes
    op: np.ndarray  # log-probs over the 4 operations
    kind: np.ndarray
    value: np.ndarray
    at_location: int = 0


def score(
    graph: CodeGraph,
    params,
    config: ModelConfig,
    location: int | None = None,
    training: bool = False,
    rng=None,
) -> EditDistribution:
    fwd = _Forward(params, config, training, rng)
    graph_vec, node_mat = fwd.embed(graph)
    loc_logp = fwd.location_logp(graph_vec, node_mat)
    at = int(np.argmax(loc_logp.data)) if location is None else location
    z = ad.concat(graph_vec, ad.row(node_mat, at))
    return EditDistribution(
        location=loc_logp.data,
        op=fwd.head_logp("op", z).data,
        kind=fwd.head_logp("kind", z).data,
        value=fwd.head_logp("value", z).data,
        at_location=at,
    )


def _loss_tensor(fwd: _Forward, graph: CodeGraph, gold: IndexedEdit) -> ad.Tensor:
    graph_vec, node_mat = fwd.embed(graph)
    loc_logp = fwd.location_logp(graph_vec, node_mat)
    terms = [ad.pick(loc_logp, gold.location)]
    z = ad.concat(graph_vec, ad.row(node_mat, gold.location))
    terms.append(ad.pick(fwd.head_logp("op", z), OP_INDEX[gold.op]))
    if gold.op in _KIND_OPS:
        terms.append(ad.pick(fwd.head_logp("kind", z), gold.kind_id))
    if gold.op in _VALUE_OPS and gold.value_id is not None:
        terms.append(ad.pick(fwd.head_logp("value", z), gold.value_id))
    return ad.scale(ad.add_all(terms), -1.0)


def loss(
    graph: CodeGraph,
    gold: IndexedEdit,
    params,
    config: ModelConfig,
    training: bool = False,
    rng=None,
) -> float:
    if not 0 <= gold.location < graph.n_nodes:
        raise ValueError(f"gold location {gold.location} outside graph")
    fwd = _Forward(params, config, training, rng)
    return float(_loss_tensor(fwd, graph, gold).data)


def grad(
    graph: CodeGraph,
    gold: IndexedEdit,
    params,
    config: ModelConfig,
    training: bool = False,
    rng=None,
) -> tuple[float, dict[str, np.ndarray]]:
    fwd = _Forward(params, config, training, rng)
    out = _loss_tensor(fwd, graph, gold)
    ad.backward(out)
    grads = {
        name: (t.grad if t.grad is not None else np.zeros_like(t.data))
        for name, t in fwd.tensors.items()
    }
    return float(out.data), grads


def grad_check(
    params,
    graph: CodeGraph,
    gold: IndexedEdit,
    config: ModelConfig,
    epsilon: float = 1e-4,
) -> float:
    """Max relative error of analytic gradients vs central differences."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _, analytic = grad(graph, gold, params, config)
    worst = 0.0
    for name in sorted(params):
        array = params[name]
        grads = analytic.get(name, np.zeros_like(array))
        flat = array.reshape(-1)
        gflat = grads.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + epsilon
            up = loss(graph, gold, params, config)
            flat[i] = original - epsilon
            down = loss(graph, gold, params, config)
            flat[i] = original
            numeric = (up - down) / (2.0 * epsilon)
            denom = max(abs(gflat[i]) + abs(numeric), 1e-6)
            worst = max(worst, abs(gflat[i] - numeric) / denom)
    return worst


# -- training ----------------------------------------------------------------


def edits_match(pred: IndexedEdit, gold: IndexedEdit, unknown_id: int) -> bool:
    """Exact-match rule shared by validation tracking and evaluation: a
    predicted UNKNOWN value never matches."""
    if pred.location != gold.location or pred.op != gold.op:
        return False
    if gold.op in _KIND_OPS and pred.kind_id != gold.kind_id:
        return False
    if gold.op in _VALUE_OPS and (gold.value_id is not None or pred.value_id is not None):
        if pred.value_id != gold.value_id or pred.value_id == unknown_id:
            return False
    return True


def _adam_step(params, grads, state, config: ModelConfig, beta1=0.9, beta2=0.999, eps=1e-8):
    state["t"] += 1
    t = state["t"]
    lr = config.learning_rate
    for name in sorted(params):
        g = grads[name]
        m = state["m"][name] = beta1 * state["m"][name] + (1 - beta1) * g
        v = state["v"][name] = beta2 * state["v"][name] + (1 - beta2) * g * g
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        params[name] -= lr * m_hat / (np.sqrt(v_hat) + eps)


def train(
    train_set,
    val_set,
    vocab: Vocabulary,
    config: ModelConfig,
    params=None,
    log=None,
):
    """Adam over shuffled mini-batches of (graph, gold) pairs.

    Tracks per-epoch mean train loss and validation top-1; returns the
    parameters of the best validation epoch plus the history.
    """
    if not train_set:
        raise ValueError("empty training set")
    params = params if params is not None else init_params(vocab, config)
    state = {
        "t": 0,
        "m": {k: np.zeros_like(v) for k, v in params.items()},
        "v": {k: np.zeros_like(v) for k, v in params.items()},
    }
    history = []
    best = {"val_top1": -1.0, "params": {k: v.copy() for k, v in params.items()}}
    for epoch in range(config.epochs):
        order = np.random.default_rng([config.seed, 7919 + epoch]).permutation(len(train_set))
        epoch_losses = []
        for batch_no, start in enumerate(range(0, len(order), config.batch_size)):
            batch = order[start : start + config.batch_size]
            rng = np.random.default_rng([config.seed, epoch, batch_no])
            total_grads = {k: np.zeros_like(v) for k, v in params.items()}
            batch_loss = 0.0
            for idx in batch:
                graph, gold = train_set[idx]
                value, grads = grad(graph, gold, params, config, training=True, rng=rng)
                if not np.isfinite(value):
                    raise TrainingDiverged(
                        f"non-finite loss {value} at epoch {epoch}, batch {batch_no}"
                    )
                batch_loss += value
                for name, array in grads.items():
                    total_grads[name] += array
            scale = 1.0 / len(batch)
            for name in total_grads:
                total_grads[name] *= scale
            epoch_losses.append(batch_loss * scale)
            _adam_step(params, total_grads, state, config)
        val_top1 = _accuracy_top1(val_set, params, config, vocab) if val_set else 0.0
        record = {
            "epoch": epoch,
            "train_loss": float(np.mean(epoch_losses)),
            "val_top1": val_top1,
        }
        history.append(record)
        if log is not None:
            log(record)
        if val_top1 >= best["val_top1"]:
            best = {"val_top1": val_top1, "params": {k: v.copy() for k, v in params.items()}}
    return best["params"], history


def _accuracy_top1(examples, params, config, vocab) -> float:
    if not examples:
        return 0.0
    unknown = vocab.unknown_value_id
    hits = 0
    for graph, gold in examples:
        preds = beam_infer(graph, params, config, 1, vocab)
        if preds and edits_match(preds[0][0], gold, unknown):
            hits += 1
    return hits / len(examples)


# -- inference ---------------------------------------------------------------


def _head_forward(params, name, z):
    hidden = np.tanh(z @ params[f"{name}_W1"] + params[f"{name}_b1"])
    logits = hidden @ params[f"{name}_W2"] + params[f"{name}_b2"]
    shifted = logits - logits.max()
    return shifted - np.log(np.exp(shifted).sum())


def beam_infer(
    graph: CodeGraph,
    params,
    config: ModelConfig,
    k: int,
    vocab: Vocabulary,
):
    """Exact top-k joint edits by summed log-probability.

    Locations are visited in decreasing prior order; since conditional
    log-probs are never positive, the scan stops once the location prior
    cannot beat the current k-th best joint. Ties break on (location, op,
    value id, kind id) ascending.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    fwd = _Forward(params, config, training=False)
    graph_vec_t, node_mat_t = fwd.embed(graph)
    graph_vec, node_mat = graph_vec_t.data, node_mat_t.data
    loc_scores = node_mat @ (params["loc_A"] @ graph_vec)
    shifted = loc_scores - loc_scores.max()
    loc_logp = shifted - np.log(np.exp(shifted).sum())

    kind_labels = {i: label for label, i in vocab.kinds.items()}
    value_tokens = {i: tok for tok, i in vocab.values.items()}
    from ..syntax import grammar as g

    candidates: list[tuple[float, tuple, IndexedEdit]] = []

    def kth_score() -> float:
        return candidates[k - 1][0] if len(candidates) >= k else -np.inf

    def push(score_val, location, op, kind_id=None, value_id=None):
        kind_label = kind_labels.get(kind_id) if kind_id is not None else None
        value_token = value_tokens.get(value_id) if value_id is not None else None
        if value_token == UNKNOWN_VALUE:
            value_token = None
        edit = IndexedEdit(
            op=op,
            location=int(location),
            kind_label=kind_label,
            value_token=value_token,
            kind_id=kind_id,
            value_id=value_id,
        )
        tie = (
            int(location),
            OP_INDEX[op],
            value_id if value_id is not None else -1,
            kind_id if kind_id is not None else -1,
        )
        candidates.append((score_val, tie, edit))
        candidates.sort(key=lambda item: (-item[0], item[1]))
        del candidates[k:]

    order = np.argsort(-loc_logp, kind="stable")
    for v in order:
        lp = float(loc_logp[v])
        if len(candidates) >= k and lp < kth_score() - 1e-12:
            break
        if graph.is_value_node[v]:
            continue
        z = np.concatenate([graph_vec, node_mat[v]])
        op_logp = _head_forward(params, "op", z)
        kind_logp = _head_forward(params, "kind", z)
        value_logp = _head_forward(params, "value", z)
        top_kinds = np.argsort(-kind_logp, kind="stable")[: max(k, 1)]
        top_values = np.argsort(-value_logp, kind="stable")[: max(k, 1)]

        if graph.semantic_leaf[v] and v != graph.root:
            push(lp + op_logp[OP_INDEX["DEL_NODE"]], v, "DEL_NODE")
        for kid in top_kinds:
            push(
                lp + op_logp[OP_INDEX["REP_TYPE"]] + kind_logp[kid],
                v,
                "REP_TYPE",
                kind_id=int(kid),
            )
        if graph.value_bearing[v]:
            for vid in top_values:
                push(
                    lp + op_logp[OP_INDEX["REP_VAL"]] + value_logp[vid],
                    v,
                    "REP_VAL",
                    value_id=int(vid),
                )
        add_base = lp + op_logp[OP_INDEX["ADD_NODE"]]
        for kid in top_kinds:
            label = kind_labels.get(int(kid))
            if label in g.VALUE_KINDS:
                for vid in top_values:
                    push(
                        add_base + kind_logp[kid] + value_logp[vid],
                        v,
                        "ADD_NODE",
                        kind_id=int(kid),
                        value_id=int(vid),
                    )
            else:
                push(add_base + kind_logp[kid], v, "ADD_NODE", kind_id=int(kid))

    ranked = sorted(candidates, key=lambda item: (-item[0], item[1]))[:k]
    return [(edit, score_val) for score_val, _tie, edit in ranked]


# -- checkpoints ---------------------------------------------------------------


def save_checkpoint(path, params, config: ModelConfig, vocab_sha256: str) -> None:
    """Single-file container: magic, uint32 little-endian header length, JSON
    header (config, vocab hash, tensor manifest), then '<f8' tensor payloads
    at the recorded offsets."""
    names = sorted(params)
    manifest = []
    offset = 0
    for name in names:
        array = params[name]
        nbytes = array.size * 8
        manifest.append(
            {"name": name, "shape": list(array.shape), "dtype": "<f8", "offset": offset}
        )
        offset += nbytes
    header = json.dumps(
        {
            "format": 1,
            "config": asdict(config),
            "vocab_sha256": vocab_sha256,
            "tensors": manifest,
        },
        sort_keys=True,
    ).encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(CHECKPOINT_MAGIC)
        handle.write(struct.pack("<I", len(header)))
        handle.write(header)
        for name in names:
            handle.write(params[name].astype("<f8").tobytes())


def load_checkpoint(path):
    """Returns (params, config, vocab_sha256)."""
    with open(path, "rb") as handle:
        magic = handle.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        (header_len,) = struct.unpack("<I", handle.read(4))
        header = json.loads(handle.read(header_len).decode("utf-8"))
        payload = handle.read()
    params = {}
    for entry in header["tensors"]:
        size = int(np.prod(entry["shape"])) if entry["shape"] else 1
        start = entry["offset"]
        array = np.frombuffer(payload, dtype="<f8", count=size, offset=start)
        params[entry["name"]] = array.reshape(entry["shape"]).copy()
    config = ModelConfig(**header["config"])
    return params, config, header["vocab_sha256"]
