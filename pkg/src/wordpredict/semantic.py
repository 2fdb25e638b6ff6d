"""Latent semantic space built from term-term co-occurrence counts.

A sparse windowed co-occurrence matrix is log-damped, reduced with a
block power iteration SVD, and each surviving row becomes a unit-length
term vector.  The space also carries a per-term density table: the mean
cosine of a term's nearest neighbors, used downstream as a confidence
signal.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Token, Vocabulary, WORD

_TEXT_MAGIC = "wordpredict-lsa-space"
_BINARY_MAGIC = b"WPLSASP1"


class NotInSpaceError(KeyError):
    """Raised when a queried word has no term vector."""


class SvdConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual_norm: float, last_change: float):
        self.iterations = iterations
        self.residual_norm = residual_norm
        self.last_change = last_change
        super().__init__(
            f"SVD did not converge after {iterations} iterations "
            f"(residual norm {residual_norm:.3e}, last change {last_change:.3e})"
        )


@dataclass
class CooccurrenceMatrix:
    """Sparse window counts: rows = LSA vocabulary, columns = most frequent rows."""

    row_words: list[str]
    col_words: list[str]
    counts: sp.csr_matrix            # raw counts
    window_half_width: int

    def weighted(self) -> sp.csr_matrix:
        """log(1 + count) damping; keeps the SVD well conditioned."""
        out = self.counts.astype(np.float64).copy()
        out.data = np.log1p(out.data)
        return out


def build_cooccurrence(
    tokens: Iterable[Token],
    lsa_vocab: Vocabulary,
    column_count: int,
    window_half_width: int,
) -> CooccurrenceMatrix:
    """Count column words within +-window positions of each row word.

    Positions are counted over the content-word stream: only word tokens
    present in ``lsa_vocab`` (which the caller builds without stopwords)
    survive.  A token's own position lies inside its window, so a row
    word that is also a column word co-occurs with itself once per use.
    """
    if window_half_width < 1:
        raise ValueError("window_half_width must be >= 1")
    n_rows = len(lsa_vocab) - 1  # <unk> is not a term
    if not 1 <= column_count <= n_rows:
        raise ValueError("column_count must be in 1..len(lsa_vocab)-1")

    row_words = list(lsa_vocab.words[1:])
    # columns: most frequent content words; vocabulary ids are already
    # ordered by descending count
    col_words = row_words[:column_count]

    stream = [
        lsa_vocab.id_of(t.surface) - 1
        for t in tokens
        if t.kind == WORD and t.surface in lsa_vocab and lsa_vocab.id_of(t.surface) != 0
    ]
    ids = np.asarray(stream, dtype=np.intp)
    shape = (n_rows, column_count)
    mat = sp.csr_matrix(shape, dtype=np.int64)
    if ids.size:
        def accumulate(rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
            keep = cols < column_count
            return sp.coo_matrix(
                (np.ones(keep.sum(), dtype=np.int64), (rows[keep], cols[keep])),
                shape=shape,
            ).tocsr()

        mat = mat + accumulate(ids, ids)  # self position
        for d in range(1, window_half_width + 1):
            if d >= ids.size:
                break
            mat = mat + accumulate(ids[:-d], ids[d:])
            mat = mat + accumulate(ids[d:], ids[:-d])
    return CooccurrenceMatrix(row_words, col_words, mat.tocsr(), window_half_width)


def truncated_svd(
    matrix,
    k: int,
    tol: float = 1e-8,
    max_iter: int = 1000,
    seed: int = 0,
    oversample: int = 8,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Top-k singular triplets via block power iteration with QR steps.

    Deterministic for a fixed seed.  Convergence is declared when the
    top-k singular value estimates change by less than ``tol`` relative
    to the leading value; running out of iterations raises
    :class:`SvdConvergenceError` carrying the subspace residual norm.
    """
    a = matrix if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
    if sp.issparse(a):
        a = a.astype(np.float64).tocsr()
        nnz = a.nnz
        fro2 = float((a.data**2).sum())
    else:
        nnz = np.count_nonzero(a)
        fro2 = float((a**2).sum())
    n_rows, n_cols = a.shape
    if not 1 <= k <= min(n_rows, n_cols):
        raise ValueError(f"k={k} must be in 1..min{a.shape}")
    if nnz == 0:
        raise ValueError("matrix has no nonzero entries")

    block = min(k + oversample, min(n_rows, n_cols))
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(a @ rng.standard_normal((n_cols, block)))
    prev = None
    change = math.inf
    for _ in range(max_iter):
        q2, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ q2)
        b = (a.T @ q).T  # == q.T @ a, kept sparse-friendly
        values = np.linalg.svd(b, compute_uv=False)[:k]
        if prev is not None:
            change = float(np.max(np.abs(values - prev))) / max(values[0], 1e-300)
            if change <= tol:
                prev = values
                break
        prev = values
    else:
        residual = math.sqrt(max(fro2 - float((b**2).sum()), 0.0))
        raise SvdConvergenceError(max_iter, residual, change)

    u_small, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ u_small[:, :k]
    return u, s[:k], vt[:k]


class SemanticSpace:
    """Unit-length k-dimensional term vectors plus a per-term density table."""

    def __init__(
        self,
        words: Sequence[str],
        vectors: np.ndarray,
        density: np.ndarray,
        density_m: int,
    ):
        self.words: list[str] = list(words)
        self.vectors = np.asarray(vectors, dtype=np.float64)
        self.density = np.asarray(density, dtype=np.float64)
        self.density_m = density_m
        self.index: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        if self.vectors.shape[0] != len(self.words):
            raise ValueError("one vector per word required")

    @property
    def dims(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def row_of(self, word: str) -> int:
        try:
            return self.index[word]
        except KeyError:
            raise NotInSpaceError(word) from None

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.row_of(word)]

    def cosine(self, word_a: str, word_b: str) -> float:
        """Dot product of the stored unit vectors."""
        return float(self.vector(word_a) @ self.vector(word_b))

    def nearest_neighbors(
        self, word: str, m: int, min_cosine: float = -1.0
    ) -> list[tuple[str, float]]:
        """Up to m distinct words above ``min_cosine``, best first.

        Equal cosines are ordered by row index, matching a stable full
        scan of the space.
        """
        if m < 1:
            raise ValueError("m must be >= 1")
        row = self.row_of(word)
        sims = self.vectors @ self.vectors[row]
        order = np.lexsort((np.arange(len(sims)), -sims))
        out: list[tuple[str, float]] = []
        for i in order:
            if i == row:
                continue
            if sims[i] <= min_cosine:
                break
            out.append((self.words[i], float(sims[i])))
            if len(out) == m:
                break
        return out

    def density_of(self, word: str, m: int | None = None) -> float:
        """Mean cosine of the m nearest neighbors (the stored table for
        the build-time m, recomputed otherwise)."""
        row = self.row_of(word)
        if m is None or m == self.density_m:
            return float(self.density[row])
        return _density_for_rows(self.vectors, [row], m)[0]

    # -- serialization ----------------------------------------------------

    def save_text(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{_TEXT_MAGIC}\t1\t{self.dims}\t{len(self.words)}\t{self.density_m}\n")
            for i, w in enumerate(self.words):
                comps = " ".join(repr(float(x)) for x in self.vectors[i])
                f.write(f"{w}\t{float(self.density[i])!r}\t{comps}\n")

    @classmethod
    def load_text(cls, path: str | Path) -> "SemanticSpace":
        with open(path, encoding="utf-8") as f:
            header = f.readline().rstrip("\n").split("\t")
            if len(header) != 5 or header[0] != _TEXT_MAGIC or header[1] != "1":
                raise ValueError(f"{path}: not a semantic space file")
            dims, count, density_m = int(header[2]), int(header[3]), int(header[4])
            words, vectors, density = [], [], []
            for line in f:
                if not line.strip():
                    continue
                word, dens, comps = line.rstrip("\n").split("\t")
                words.append(word)
                density.append(float(dens))
                vectors.append([float(x) for x in comps.split(" ")])
        arr = np.asarray(vectors, dtype=np.float64).reshape(len(words), dims)
        if len(words) != count:
            raise ValueError(f"{path}: header declares {count} terms, found {len(words)}")
        return cls(words, arr, np.asarray(density), density_m)

    def save_binary(self, path: str | Path) -> None:
        with open(path, "wb") as f:
            f.write(_BINARY_MAGIC)
            f.write(struct.pack("<III", self.dims, len(self.words), self.density_m))
            for i, w in enumerate(self.words):
                raw = w.encode("utf-8")
                f.write(struct.pack("<H", len(raw)))
                f.write(raw)
                f.write(struct.pack("<d", self.density[i]))
                f.write(self.vectors[i].astype("<f8").tobytes())

    @classmethod
    def load_binary(cls, path: str | Path) -> "SemanticSpace":
        data = Path(path).read_bytes()
        if data[: len(_BINARY_MAGIC)] != _BINARY_MAGIC:
            raise ValueError(f"{path}: not a binary semantic space file")
        off = len(_BINARY_MAGIC)
        dims, count, density_m = struct.unpack_from("<III", data, off)
        off += 12
        words, vectors, density = [], [], []
        for _ in range(count):
            (wlen,) = struct.unpack_from("<H", data, off)
            off += 2
            words.append(data[off : off + wlen].decode("utf-8"))
            off += wlen
            (dens,) = struct.unpack_from("<d", data, off)
            off += 8
            density.append(dens)
            vectors.append(np.frombuffer(data, dtype="<f8", count=dims, offset=off))
            off += 8 * dims
        return cls(words, np.vstack(vectors), np.asarray(density), density_m)

    @classmethod
    def load(cls, path: str | Path) -> "SemanticSpace":
        with open(path, "rb") as f:
            magic = f.read(len(_BINARY_MAGIC))
        if magic == _BINARY_MAGIC:
            return cls.load_binary(path)
        return cls.load_text(path)


def _density_for_rows(vectors: np.ndarray, rows, m: int) -> np.ndarray:
    n = vectors.shape[0]
    m_eff = min(m, n - 1)
    out = np.zeros(len(rows))
    if m_eff <= 0:
        return out
    sims = vectors[rows] @ vectors.T
    for j, row in enumerate(rows):
        sims[j, row] = -np.inf
        top = np.partition(sims[j], n - m_eff)[n - m_eff :]
        out[j] = top.mean()
    return out


def compute_density_table(vectors: np.ndarray, m: int, block: int = 512) -> np.ndarray:
    """Mean top-m cosine for every row, computed in blocks."""
    n = vectors.shape[0]
    out = np.zeros(n)
    for start in range(0, n, block):
        rows = range(start, min(start + block, n))
        out[start : start + len(rows)] = _density_for_rows(vectors, list(rows), m)
    return out


def build_semantic_space(
    matrix: CooccurrenceMatrix,
    k: int,
    density_m: int = 100,
    tol: float = 1e-8,
    max_iter: int = 1000,
    seed: int = 0,
) -> SemanticSpace:
    """Reduce a co-occurrence matrix to unit term vectors plus densities.

    Row vectors are the left singular vectors scaled by their singular
    values, then normalized.  Rows whose projection is numerically zero
    (words with no usable co-occurrence signal) are dropped from the
    space and behave as out-of-space words downstream.
    """
    u, s, _ = truncated_svd(matrix.weighted(), k, tol=tol, max_iter=max_iter, seed=seed)
    raw = u * s
    norms = np.linalg.norm(raw, axis=1)
    keep = norms > 1e-12
    words = [w for w, good in zip(matrix.row_words, keep) if good]
    vectors = raw[keep] / norms[keep, None]
    density = compute_density_table(vectors, density_m)
    return SemanticSpace(words, vectors, density, density_m)
