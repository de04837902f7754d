"""Ranker math: Top-X selection, metric identities, random baseline."""
import numpy as np
import pytest

from wordart.errors import MissingScores, ShapeMismatch
from wordart.glyph import load_glyph, normalize_outline, parameterize
from wordart.providers import MockProvider, StylizeRequest
from wordart.raster import RasterConfig, RasterImage, rasterize
from wordart.ranker import (
    Candidate,
    EvalDataset,
    calibrate_threshold,
    evaluate_topx,
    heuristic_score,
    load_dataset,
    random_baseline,
    save_dataset,
    select_top_x,
)


def make_dataset(n_chars=20, pool=10, positives=2, seed=0):
    """Synthetic labeled pools; positives land at deterministic slots."""
    rng = np.random.default_rng(seed)
    per = {}
    for ci in range(n_chars):
        ch = chr(0x4E00 + ci)
        pos_slots = set(rng.choice(pool, size=positives, replace=False).tolist())
        per[ch] = [
            Candidate(id=f"{ci:02d}_{k:02d}", character=ch, label=k in pos_slots)
            for k in range(pool)
        ]
    return EvalDataset(per)


def oracle_scores(dataset):
    return {
        c.id: 1.0 if c.label else 0.0
        for pool in dataset.per_character.values()
        for c in pool
    }


# --- selection ---------------------------------------------------------------

def test_select_all_when_x_exceeds_pool():
    pool = [Candidate(id=f"c{i}", character="a", score=float(i)) for i in range(4)]
    assert len(select_top_x(pool, 99)) == 4


def test_selection_matches_full_sort_prefix():
    rng = np.random.default_rng(1)
    pool = [
        Candidate(id=f"c{i:03d}", character="a", score=float(s))
        for i, s in enumerate(rng.permutation(50))
    ]
    full = sorted(pool, key=lambda c: -c.score)
    for x in (1, 3, 10, 50):
        assert [c.id for c in select_top_x(pool, x)] == [c.id for c in full[:x]]


def test_ties_broken_by_ascending_id():
    pool = [
        Candidate(id="b", character="a", score=1.0),
        Candidate(id="a", character="a", score=1.0),
        Candidate(id="c", character="a", score=2.0),
    ]
    assert [c.id for c in select_top_x(pool, 3)] == ["c", "a", "b"]


def test_missing_scores_raise():
    pool = [Candidate(id="a", character="a")]
    with pytest.raises(MissingScores):
        select_top_x(pool, 1)
    ds = make_dataset(2, 3, 1)
    with pytest.raises(MissingScores):
        evaluate_topx(ds, {}, [1])


# --- evaluate_topx -----------------------------------------------------------

def test_oracle_scores_top1_is_perfect():
    ds = make_dataset(20, 10, 2)
    report = evaluate_topx(ds, oracle_scores(ds), [1])
    assert report.precision(1) == 100.0
    assert report.success(1) == 100.0


def test_synthetic_hand_count():
    """20 chars x 10 candidates, exactly 2 positives each, oracle scores."""
    ds = make_dataset(20, 10, 2)
    report = evaluate_topx(ds, oracle_scores(ds), [1, 2, 5])
    assert report.rows[2] == (100.0, 100.0, 100.0)
    # Top5 selects 100 candidates of which 40 are positive.
    assert report.precision(5) == pytest.approx(40.0)
    assert report.recall(5) == pytest.approx(100.0)


def test_top1_precision_equals_success_rate_always():
    rng = np.random.default_rng(7)
    for seed in range(5):
        ds = make_dataset(12, 8, positives=int(rng.integers(1, 4)), seed=seed)
        scores = {c.id: float(rng.normal()) for p in ds.per_character.values() for c in p}
        report = evaluate_topx(ds, scores, [1, 2, 5])
        assert report.precision(1) == report.success(1)
        rnd = random_baseline(ds, [1], n_iterations=200, seed=seed)
        assert rnd.precision(1) == pytest.approx(rnd.success(1))


def test_recall_and_success_monotone_in_x():
    ds = make_dataset(15, 9, 2, seed=3)
    rng = np.random.default_rng(5)
    scores = {c.id: float(rng.normal()) for p in ds.per_character.values() for c in p}
    report = evaluate_topx(ds, scores, [1, 2, 5, 9])
    xs = [1, 2, 5, 9]
    for a, b in zip(xs, xs[1:]):
        assert report.recall(b) >= report.recall(a)
        assert report.success(b) >= report.success(a)


def test_argsort_invariance_under_monotone_transform():
    ds = make_dataset(10, 7, 2, seed=9)
    rng = np.random.default_rng(2)
    scores = {c.id: float(rng.uniform(0.1, 5)) for p in ds.per_character.values() for c in p}
    warped = {k: np.exp(3.0 * v) + 7.0 for k, v in scores.items()}
    a = evaluate_topx(ds, scores, [1, 2, 5])
    b = evaluate_topx(ds, warped, [1, 2, 5])
    assert a.rows == b.rows


# --- random baseline ----------------------------------------------------------

def test_random_precision_matches_global_rate():
    """Equal pools: expected precision is the positive rate at every X."""
    ds = make_dataset(20, 11, 2)  # rate 2/11 = 18.18%
    rho = 100.0 * ds.positive_rate
    report = random_baseline(ds, [1, 2, 5, 10], n_iterations=10_000, seed=1)
    for x in (1, 2, 5, 10):
        assert report.precision(x) == pytest.approx(rho, abs=0.5)


def test_random_recall_grows_linearly():
    ds = make_dataset(20, 11, 2)
    report = random_baseline(ds, [1, 2, 5, 10], n_iterations=10_000, seed=2)
    r1 = report.recall(1)
    for x in (2, 5, 10):
        assert report.recall(x) == pytest.approx(x * r1, rel=0.1)


def test_random_single_iteration_reproducible():
    ds = make_dataset(6, 5, 1)
    a = random_baseline(ds, [1, 2], n_iterations=1, seed=42)
    b = random_baseline(ds, [1, 2], n_iterations=1, seed=42)
    assert a.rows == b.rows


def test_oracle_dominates_random_everywhere():
    ds = make_dataset(16, 10, 2, seed=4)
    ranked = evaluate_topx(ds, oracle_scores(ds), [1, 2, 5, 10])
    rand = random_baseline(ds, [1, 2, 5, 10], n_iterations=2_000, seed=4)
    for x in (1, 2, 5, 10):
        for mi in range(3):
            assert ranked.rows[x][mi] >= rand.rows[x][mi] - 1e-9


def test_report_text_layout():
    ds = make_dataset(5, 6, 1)
    report = evaluate_topx(ds, oracle_scores(ds), [1, 2])
    text = report.to_text()
    assert "Top1" in text and "Top2" in text
    assert text.splitlines()[2].startswith("ranking   p")


# --- heuristic score ------------------------------------------------------------

@pytest.fixture(scope="module")
def reference(font_bytes):
    outline = normalize_outline(load_glyph(font_bytes, ord("B")), 128)
    return rasterize(parameterize(outline), RasterConfig(128, 128))


def test_identical_candidate_maximizes_iou_term(reference):
    s_same = heuristic_score(reference, reference)
    blank = RasterImage(np.zeros((128, 128)))
    assert s_same > heuristic_score(blank, reference)


def test_blank_scores_below_mock_stylized(reference, font_bytes):
    provider = MockProvider()
    blank_score = heuristic_score(RasterImage(np.zeros((128, 128))), reference)
    for ch in "OIBSW":
        img = rasterize(
            parameterize(normalize_outline(load_glyph(font_bytes, ord(ch)), 128)),
            RasterConfig(128, 128),
        )
        sty = provider.stylize(StylizeRequest(img, prompt="Pizza, delicious", seed=1))
        ref = rasterize(
            parameterize(normalize_outline(load_glyph(font_bytes, ord(ch)), 128)),
            RasterConfig(128, 128),
        )
        assert heuristic_score(sty, ref) > blank_score


def test_score_deterministic_and_shape_checked(reference):
    rng = np.random.default_rng(0)
    img = RasterImage(rng.uniform(0, 1, (128, 128)))
    assert heuristic_score(img, reference) == heuristic_score(img, reference)
    with pytest.raises(ShapeMismatch):
        heuristic_score(RasterImage(np.zeros((64, 64))), reference)


def test_calibrate_threshold_percentile():
    scores = list(np.linspace(0, 1, 101))
    assert calibrate_threshold(scores, 60) == pytest.approx(0.6)


# --- disk io ----------------------------------------------------------------------

def test_dataset_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    per = {}
    for ci, ch in enumerate("ab"):
        pool = []
        for k in range(3):
            from wordart.providers import RenderedImage

            img = RenderedImage(rng.integers(0, 255, (16, 16, 3), dtype=np.uint8))
            pool.append(
                Candidate(id=f"{ci}_{k}", character=ch, label=k == 0, image=img)
            )
        per[ch] = pool
    ds = EvalDataset(per)
    root = save_dataset(ds, tmp_path / "ds")
    back = load_dataset(root)
    assert set(back.per_character) == {"a", "b"}
    for ch in "ab":
        got = {c.id: c.label for c in back.per_character[ch]}
        want = {c.id: c.label for c in ds.per_character[ch]}
        assert got == want
        for c in back.per_character[ch]:
            assert c.image is not None and c.image.pixels.shape == (16, 16, 3)
