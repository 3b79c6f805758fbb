import numpy as np
import pytest

from specaug import (
    FreqMaskParams,
    MaskRecord,
    Spectrogram,
    TimeMaskParams,
    apply_masks,
    freq_mask,
    time_mask,
)
from specaug.errors import NormalizationError
from specaug.rng import RngStream

from conftest import random_normalized_spec


def masked_region(shape, records):
    covered = np.zeros(shape, dtype=bool)
    for r in records:
        if r.axis == "frequency":
            covered[r.start : r.start + r.width, :] = True
        else:
            covered[:, r.start : r.start + r.width] = True
    return covered


def test_freq_mask_zero_fill_and_complement_preserved():
    spec = random_normalized_spec(80, 200, seed=1)
    out, records = freq_mask(spec, FreqMaskParams(27, count=2), RngStream(3))
    covered = masked_region(out.values.shape, records)
    assert np.all(out.values[covered] == 0.0)
    np.testing.assert_array_equal(out.values[~covered], spec.values[~covered])


def test_time_mask_zero_fill_and_complement_preserved():
    spec = random_normalized_spec(80, 200, seed=2)
    out, records = time_mask(spec, TimeMaskParams(100, count=2), RngStream(4))
    covered = masked_region(out.values.shape, records)
    assert np.all(out.values[covered] == 0.0)
    np.testing.assert_array_equal(out.values[~covered], spec.values[~covered])


def test_records_match_what_was_zeroed():
    spec = Spectrogram(np.full((40, 60), 0.5), normalized=True)
    out, records = apply_masks(
        spec, FreqMaskParams(10, 2), TimeMaskParams(20, 1.0, 2), RngStream(5)
    )
    covered = masked_region(out.values.shape, records)
    np.testing.assert_array_equal(out.values == 0.0, covered)


def test_mask_requires_normalized_input():
    spec = Spectrogram(np.ones((10, 10)))
    with pytest.raises(NormalizationError):
        freq_mask(spec, FreqMaskParams(3), RngStream(0))
    with pytest.raises(NormalizationError):
        time_mask(spec, TimeMaskParams(3), RngStream(0))


def test_disabled_params_do_not_draw_or_copy():
    spec = random_normalized_spec(20, 30, seed=3)
    for params in (FreqMaskParams(0, 5), FreqMaskParams(10, 0)):
        out, records = freq_mask(spec, params, RngStream(1))
        assert out.values is spec.values
        assert records == []
    out, records = time_mask(spec, TimeMaskParams(5, 0.0, 5), RngStream(1))
    assert out.values is spec.values
    assert records == []


def test_width_bounds_freq():
    spec = random_normalized_spec(80, 50, seed=4)
    widths = []
    for seed in range(300):
        _, records = freq_mask(spec, FreqMaskParams(27), RngStream(seed))
        widths.append(records[0].width)
        start, width = records[0].start, records[0].width
        assert 0 <= width <= 27
        assert 0 <= start <= 80 - width - 1
    assert max(widths) == 27  # the cap itself is reachable


def test_width_cap_respects_channel_count():
    spec = random_normalized_spec(8, 50, seed=5)
    for seed in range(200):
        _, records = freq_mask(spec, FreqMaskParams(27), RngStream(seed))
        assert records[0].width <= 7  # never the whole axis


def test_time_mask_fraction_cap():
    spec = random_normalized_spec(20, 50, seed=6)
    for seed in range(300):
        _, records = time_mask(spec, TimeMaskParams(70, max_frac=0.2), RngStream(seed))
        assert records[0].width <= 10  # floor(0.2 * 50)


def test_time_mask_width_cap_on_short_input():
    spec = random_normalized_spec(20, 5, seed=7)
    for seed in range(100):
        _, records = time_mask(spec, TimeMaskParams(100), RngStream(seed))
        assert records[0].width <= 4  # tau - 1


def test_mask_count():
    spec = random_normalized_spec(80, 300, seed=8)
    out, records = apply_masks(
        spec, FreqMaskParams(27, 2), TimeMaskParams(100, 1.0, 2), RngStream(9)
    )
    assert len(records) == 4
    assert [r.axis for r in records] == ["frequency", "frequency", "time", "time"]


def test_masks_may_overlap_without_error():
    spec = random_normalized_spec(10, 10, seed=9)
    out, records = freq_mask(spec, FreqMaskParams(9, count=6), RngStream(10))
    covered = masked_region(out.values.shape, records)
    assert np.all(out.values[covered] == 0.0)


def test_zero_width_draw_changes_nothing():
    spec = random_normalized_spec(30, 30, seed=10)
    # Find a seed whose single draw has width 0.
    for seed in range(500):
        out, records = freq_mask(spec, FreqMaskParams(5), RngStream(seed))
        if records[0].width == 0:
            np.testing.assert_array_equal(out.values, spec.values)
            return
    raise AssertionError("no zero-width draw in 500 seeds")


def test_same_stream_same_masks():
    spec = random_normalized_spec(80, 100, seed=11)
    a = freq_mask(spec, FreqMaskParams(27, 2), RngStream(12))[1]
    b = freq_mask(spec, FreqMaskParams(27, 2), RngStream(12))[1]
    assert a == b


def test_mask_record_validation():
    with pytest.raises(ValueError):
        MaskRecord("diagonal", 0, 1)
    with pytest.raises(ValueError):
        MaskRecord("time", -1, 1)
    assert MaskRecord("time", 2, 3).as_dict() == {"axis": "time", "start": 2, "width": 3}


def test_param_validation():
    with pytest.raises(ValueError):
        FreqMaskParams(-1)
    with pytest.raises(ValueError):
        TimeMaskParams(5, max_frac=1.5)
    with pytest.raises(ValueError):
        TimeMaskParams(5, count=-1)
