"""Shared fixtures: the Monte-Carlo corpora several suites analyze.

Session-scoped because the 10^4-frame grids are the expensive inputs reused
by the histogram, quantizer, and acceptance tests.  Seeds are fixed so every
run sees identical data.
"""

import pytest

from stftphase.signals import CorpusKind, CorpusSpec, draw_tone_params, make_corpus
from stftphase.stft import stft_of_frames
from stftphase.windows import WindowSpec

TONE_SEED = 20240
NOISE_SEED = 5678
TONE_COUNT = 10_000
CORPUS_N = 512


@pytest.fixture(scope="session")
def tone_corpus_spec():
    return CorpusSpec(kind=CorpusKind.RANDOM_TONES, count=TONE_COUNT, n=CORPUS_N, seed=TONE_SEED)


@pytest.fixture(scope="session")
def tone_draws(tone_corpus_spec):
    return draw_tone_params(tone_corpus_spec)


@pytest.fixture(scope="session")
def tone_frames(tone_corpus_spec):
    return make_corpus(tone_corpus_spec)


@pytest.fixture(scope="session")
def tone_grid_rect(tone_frames):
    return stft_of_frames(tone_frames, WindowSpec(alpha=0.0, length=CORPUS_N))


@pytest.fixture(scope="session")
def tone_grid_hamming(tone_frames):
    return stft_of_frames(tone_frames, WindowSpec(alpha=0.46, length=CORPUS_N))


@pytest.fixture(scope="session")
def noise_frames():
    spec = CorpusSpec(kind=CorpusKind.NOISE, count=TONE_COUNT, n=CORPUS_N, seed=NOISE_SEED)
    return make_corpus(spec)


@pytest.fixture(scope="session")
def noise_grid(noise_frames):
    return stft_of_frames(noise_frames, WindowSpec(alpha=0.0, length=CORPUS_N))
