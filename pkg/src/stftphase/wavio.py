"""Minimal RIFF/WAVE reading and a 16-bit PCM writer.

Reads little-endian PCM 16-bit and IEEE float 32-bit files with one or two
channels.  Stereo is averaged to mono.  16-bit samples are normalized by
32768, so full-scale positive 0x7FFF maps to 32767/32768 (one LSB under
+1.0).  Chunks other than fmt/data are skipped.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedFormatError, WavParseError

FORMAT_PCM = 0x0001
FORMAT_IEEE_FLOAT = 0x0003

PCM16_SCALE = 32768.0


@dataclass(frozen=True)
class AudioBuffer:
    """Mono samples (nominally in [-1, 1]) and their sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate


def _read_exact(fh, size: int, what: str) -> bytes:
    data = fh.read(size)
    if len(data) != size:
        raise WavParseError(
            f"truncated file: expected {size} bytes for {what} at offset {fh.tell() - len(data)}"
        )
    return data


def read_wav(path) -> AudioBuffer:
    """Parse a RIFF/WAVE file into a mono AudioBuffer."""
    with open(path, "rb") as fh:
        riff, _, wave_tag = struct.unpack("<4sI4s", _read_exact(fh, 12, "RIFF header"))
        if riff != b"RIFF":
            raise WavParseError(f"not a RIFF file (signature {riff!r})")
        if wave_tag != b"WAVE":
            raise WavParseError(f"not a WAVE form (type {wave_tag!r})")
        fmt = None
        data = None
        while True:
            header = fh.read(8)
            if not header:
                break
            if len(header) < 8:
                raise WavParseError(
                    f"truncated chunk header at offset {fh.tell() - len(header)}"
                )
            chunk_id, size = struct.unpack("<4sI", header)
            if chunk_id == b"fmt ":
                body = _read_exact(fh, size, "fmt chunk")
                if size < 16:
                    raise WavParseError("fmt chunk shorter than 16 bytes")
                fmt = struct.unpack("<HHIIHH", body[:16])
            elif chunk_id == b"data":
                data = _read_exact(fh, size, "data chunk")
            else:
                fh.seek(size, 1)
            if size % 2:  # chunks are word-aligned with a pad byte
                fh.seek(1, 1)
        if fmt is None:
            raise WavParseError("missing fmt chunk")
        if data is None:
            raise WavParseError("missing data chunk")
    format_tag, channels, rate, _, _, bit_depth = fmt
    if format_tag == FORMAT_PCM and bit_depth == 16:
        raw = np.frombuffer(data, dtype="<i2")
        samples = raw.astype(np.float64) / PCM16_SCALE
    elif format_tag == FORMAT_IEEE_FLOAT and bit_depth == 32:
        samples = np.frombuffer(data, dtype="<f4").astype(np.float64)
    else:
        raise UnsupportedFormatError(
            f"unsupported format tag {format_tag:#06x} at {bit_depth} bits;"
            " only PCM 16-bit and IEEE float 32-bit are readable"
        )
    if channels not in (1, 2):
        raise UnsupportedFormatError(f"unsupported channel count {channels}")
    if channels == 2:
        if len(samples) % 2:
            raise WavParseError("stereo data chunk holds an odd sample count")
        samples = samples.reshape(-1, 2).mean(axis=1)
    if not np.isfinite(samples).all():
        raise WavParseError("data chunk contains non-finite samples")
    if rate <= 0:
        raise WavParseError(f"invalid sample rate {rate}")
    return AudioBuffer(samples=samples, sample_rate=int(rate))


def write_wav_pcm16(path, samples, sample_rate: int) -> None:
    """Write mono 16-bit PCM; values are scaled by 32768 and clipped."""
    samples = np.asarray(samples, dtype=np.float64)
    ints = np.clip(np.round(samples * PCM16_SCALE), -32768, 32767).astype("<i2")
    payload = ints.tobytes()
    with open(path, "wb") as fh:
        fh.write(b"RIFF")
        fh.write(struct.pack("<I", 36 + len(payload)))
        fh.write(b"WAVE")
        fh.write(b"fmt ")
        fh.write(
            struct.pack(
                "<IHHIIHH",
                16,
                FORMAT_PCM,
                1,
                sample_rate,
                sample_rate * 2,
                2,
                16,
            )
        )
        fh.write(b"data")
        fh.write(struct.pack("<I", len(payload)))
        fh.write(payload)
        if len(payload) % 2:
            fh.write(b"\x00")
