import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupaes.config import ThresholdConfig
from groupaes.faces import Rect, parse_face_annotations
from groupaes.group_features import (
    NoFacesError,
    extract_group,
    f1_open_eyed,
    f2_unoccluded,
    f3_face_orientation,
    f4_gaze,
    f5_facial_blur,
    f6_smile,
    f7_character_center,
)
from groupaes.synthetic import corpus_document, face_entry

# Independent re-derivations of the printed aggregation rules, used as the
# oracle side of every equivalence check below.


def direct_share_nonlinear(flags):
    p = sum(flags) / len(flags)
    return 1.0 if p == 1 else 1.0 - 2.0 ** (-p)


def direct_f2(flags):
    if sum(flags) == 0:
        return 1.0
    return 1.0 - 2.0 ** (-(1.0 - sum(flags) / len(flags)))


def direct_f5(flags):
    if sum(flags) == 0:
        return 1.0
    return 1.0 - sum(flags) / len(flags)


def direct_f6_paper(flags):
    if sum(flags) == 0:
        return 1.0
    return sum(flags) / len(flags)


def direct_f7(xs, width):
    r = (sum(xs) / len(xs)) / width
    return 1.0 if 0.4 <= r <= 0.6 else 0.0


class TestExamples:
    def test_f1(self):
        assert f1_open_eyed([1, 1, 1]) == 1.0
        assert f1_open_eyed([1, 0]) == pytest.approx(1 - 2**-0.5, abs=1e-12)
        assert f1_open_eyed([0, 0, 0]) == 0.0

    def test_f2(self):
        assert f2_unoccluded([0, 0]) == 1.0
        assert f2_unoccluded([1, 0]) == pytest.approx(1 - 2**-0.5, abs=1e-12)
        assert f2_unoccluded([1, 1]) == 0.0

    def test_f3(self):
        assert f3_face_orientation([1, 1, 1, 1]) == 1.0
        assert f3_face_orientation([1, 1, 1, 0]) == pytest.approx(1 - 2**-0.75, abs=1e-12)
        assert f3_face_orientation([0]) == 0.0

    def test_f4(self):
        assert f4_gaze([1, 1]) == 1.0
        assert f4_gaze([1, 0, 0, 0]) == pytest.approx(1 - 2**-0.25, abs=1e-12)
        assert f4_gaze([0, 0]) == 0.0

    def test_f5(self):
        assert f5_facial_blur([0, 0, 0]) == 1.0
        assert f5_facial_blur([1, 0]) == 0.5
        assert f5_facial_blur([1, 1]) == 0.0

    def test_f6_paper_branch(self):
        assert f6_smile([0, 0]) == 1.0
        assert f6_smile([1, 0, 0, 0]) == 0.25
        assert f6_smile([1, 1, 1]) == 1.0

    def test_f6_prose_branch(self):
        assert f6_smile([0, 0], branch="prose") == 0.0
        assert f6_smile([1, 0], branch="prose") == 0.5

    def test_f7(self):
        assert f7_character_center([60, 70], 130) == 1.0
        assert f7_character_center([10], 100) == 0.0
        assert f7_character_center([40], 100) == 1.0  # inclusive lower bound
        assert f7_character_center([60], 100) == 1.0  # inclusive upper bound
        assert f7_character_center([61], 100) == 0.0

    def test_f7_bad_width(self):
        with pytest.raises(ValueError):
            f7_character_center([10], 0)

    def test_no_faces_errors(self):
        for fn in (f1_open_eyed, f2_unoccluded, f3_face_orientation, f4_gaze,
                   f5_facial_blur, f6_smile):
            with pytest.raises(NoFacesError):
                fn([])
        with pytest.raises(NoFacesError):
            f7_character_center([], 100)


class TestExhaustiveEquivalence:
    def test_all_flag_combinations_up_to_four_faces(self):
        pairs = [
            (f1_open_eyed, direct_share_nonlinear),
            (f2_unoccluded, direct_f2),
            (f3_face_orientation, direct_share_nonlinear),
            (f4_gaze, direct_share_nonlinear),
            (f5_facial_blur, direct_f5),
            (f6_smile, direct_f6_paper),
        ]
        for n in range(1, 5):
            for flags in product([0, 1], repeat=n):
                for impl, oracle in pairs:
                    assert impl(list(flags)) == pytest.approx(
                        oracle(flags), abs=1e-12
                    ), (impl.__name__, flags)

    def test_f7_grid(self):
        width = 100.0
        grid = [0.0, 25.0, 40.0, 50.0, 60.0, 75.0, 100.0]
        for n in range(1, 5):
            for xs in product(grid, repeat=n):
                assert f7_character_center(list(xs), width) == direct_f7(xs, width)


class TestBranchStructure:
    def test_discontinuity_at_full_house(self):
        for fn in (f1_open_eyed, f3_face_orientation, f4_gaze):
            for n in range(2, 11):
                assert fn([1] * n) == 1.0
                assert fn([1] * (n - 1) + [0]) <= 0.5
        for n in range(2, 11):
            assert f2_unoccluded([0] * n) == 1.0
            assert f2_unoccluded([0] * (n - 1) + [1]) <= 0.5

    def test_nonlinear_branch_bounds(self):
        # sup of the nonlinear branch over p < 1 is 1 - 2^-1 = 0.5
        values = [f1_open_eyed([1] * k + [0]) for k in range(0, 40)]
        assert max(values) <= 0.5
        assert all(v >= 0.0 for v in values)


flag_lists = st.lists(st.booleans(), min_size=1, max_size=12)


class TestProperties:
    @given(flag_lists, st.randoms(use_true_random=False))
    def test_permutation_invariance(self, flags, rnd):
        shuffled = list(flags)
        rnd.shuffle(shuffled)
        for fn in (f1_open_eyed, f2_unoccluded, f3_face_orientation, f4_gaze,
                   f5_facial_blur, f6_smile):
            assert fn(flags) == fn(shuffled)

    @given(flag_lists, st.integers(0, 11))
    def test_single_flip_monotonicity(self, flags, position):
        position = position % len(flags)
        if flags[position]:
            return
        flipped = list(flags)
        flipped[position] = True
        for fn in (f1_open_eyed, f3_face_orientation, f4_gaze):
            assert fn(flipped) >= fn(flags)
        # f2/f5 flags mark the *bad* state, so their monotone direction flips
        assert f2_unoccluded(flipped) <= f2_unoccluded(flags)
        assert f5_facial_blur(flipped) <= f5_facial_blur(flags)
        if sum(flags) >= 1:
            assert f6_smile(flipped) >= f6_smile(flags)

    @given(st.lists(st.floats(0, 200), min_size=1, max_size=8))
    def test_f7_mirror_invariance(self, xs):
        width = 200.0
        mirrored = [width - x for x in xs]
        assert f7_character_center(xs, width) == f7_character_center(mirrored, width)


class TestExtractGroup:
    def parse(self, entries):
        return parse_face_annotations(json.dumps(corpus_document(entries)))

    def ideal_boxes(self, n=4):
        # centers symmetric around 96 on the 192-wide frame
        size = 24
        start = 96 - (n * size + (n - 1) * 8) / 2
        return [Rect(start + i * (size + 8), 40, size, size) for i in range(n)]

    def test_all_ideal_gives_ones(self):
        fs = self.parse([face_entry(b) for b in self.ideal_boxes()])
        g = extract_group(fs)
        assert g.as_array().tolist() == [1.0] * 7
        assert g.n_faces == 4

    def test_one_pair_of_closed_eyes(self):
        boxes = self.ideal_boxes()
        entries = [face_entry(boxes[0], eyes_open=False)] + [
            face_entry(b) for b in boxes[1:]
        ]
        g = extract_group(self.parse(entries))
        assert g.f1 == pytest.approx(1 - 2**-0.75, abs=1e-12)
        assert (g.f2, g.f3, g.f5, g.f6, g.f7) == (1.0, 1.0, 1.0, 1.0, 1.0)
        # closed eyes also gate the gaze prerequisite
        assert g.f4 == pytest.approx(1 - 2**-0.75, abs=1e-12)

    def test_left_fifth_means_off_center(self):
        boxes = [Rect(2 + i * 12, 40, 10, 10) for i in range(3)]
        g = extract_group(self.parse([face_entry(b) for b in boxes]))
        assert g.f7 == 0.0

    def test_no_faces_is_an_error(self):
        with pytest.raises(NoFacesError):
            extract_group(self.parse([]))

    def test_smile_branch_switch(self):
        boxes = self.ideal_boxes(2)
        entries = [face_entry(b, smiling=False) for b in boxes]
        assert extract_group(self.parse(entries)).f6 == 1.0
        assert extract_group(self.parse(entries), smile_branch="prose").f6 == 0.0
