"""
Tests for the guidance schedule and the attention substrate simulator
"""

import math

import numpy as np
import pytest

from guidance import (
    GuidanceSimulator,
    com_weight_ablation,
    init_substrate,
    layout_masks,
    make_alpha_bar,
    natural_direction,
    objects_in_frame,
    positional_spread,
    repeat_ablation,
    run_guidance,
    schedule_index,
    softmax_backward,
    unguided_metrics,
)
from models import EnergyConfig, GuidanceSchedule
from validation import EmptyDsl, ShapeMismatch, ValidationError


def static_box_layout(layout_factory, frames=2):
    return layout_factory([[(0, 'cube', 192, 192, 128, 128)]] * frames)


def sliding_layout(layout_factory, step=32, frames=6):
    return layout_factory([
        [(0, 'cart', 64 + step * f, 192, 128, 128)] for f in range(frames)
    ])


class TestSchedule:
    """Tests for the noise schedule"""

    def test_single_step(self):
        """Test a one-step sampler uses the last training index"""
        assert schedule_index(0, 1) == 999
        assert len(make_alpha_bar(1)) == 1

    def test_index_mapping(self):
        """Test steps map onto the training indices, noisiest first"""
        assert schedule_index(0, 40) == 999
        assert schedule_index(39, 40) == 0
        assert schedule_index(9, 40) == 768

    def test_monotone(self):
        """Test alpha_bar rises and the step size falls with t"""
        alpha_bar = make_alpha_bar(40)
        assert all(a < b for a, b in zip(alpha_bar, alpha_bar[1:]))
        assert all(0.0 < a < 1.0 for a in alpha_bar)

    def test_golden_step_sizes(self):
        """Test the pinned step sizes of the 40-step schedule"""
        alpha_bar = make_alpha_bar(40)
        assert math.sqrt(1.0 - alpha_bar[0]) == pytest.approx(0.9992102066, abs=1e-9)
        assert math.sqrt(1.0 - alpha_bar[9]) == pytest.approx(0.9904423648, abs=1e-9)

    def test_schedule_defaults(self):
        """Test the schedule defaults and its step size"""
        schedule = GuidanceSchedule()
        assert schedule.total_updates == 50
        assert schedule.step_size(0) == pytest.approx(0.9992102066, abs=1e-9)

    def test_invalid_schedule(self):
        """Test guided steps cannot exceed total steps"""
        with pytest.raises(ValidationError):
            GuidanceSchedule(total_steps=5, guided_steps=6)
        with pytest.raises(ValidationError):
            GuidanceSchedule(repeats_per_step=0)

    def test_geometry(self):
        """Test the step geometry defaults to natural and is case-insensitive"""
        assert GuidanceSchedule().geometry == 'natural'
        assert GuidanceSchedule(geometry='Euclidean').geometry == 'euclidean'
        assert GuidanceSchedule(geometry='euclidean').to_dict()['geometry'] == 'euclidean'
        with pytest.raises(ValidationError):
            GuidanceSchedule(geometry='sideways')

    def test_alpha_bar_needs_a_step(self):
        """Test an empty schedule is rejected with a validation error"""
        with pytest.raises(ValidationError):
            make_alpha_bar(0)


class TestSubstrate:
    """Tests for masks and the logit field"""

    def test_objects_in_frame(self, red_ball_dsl, woman_man_dsl, layout_factory):
        """Test per-frame (id, mask) lists"""
        entries = objects_in_frame(red_ball_dsl, 1, 16, 16)
        assert [object_id for object_id, _ in entries] == [0]
        assert entries[0][1].sum() == 4
        assert len(objects_in_frame(woman_man_dsl, 1, 16, 16)) == 2
        empty = layout_factory([[], [(0, 'cat', 0, 0, 64, 64)]])
        assert objects_in_frame(empty, 1, 16, 16) == []

    def test_tiny_box_gets_center_cell(self, layout_factory):
        """Test a box between cell centers still receives one target cell"""
        layout = layout_factory([[(0, 'ant', 1, 1, 4, 4)]] * 2)
        masks, present, ids = layout_masks(layout, 8, 8)
        assert ids == (0,)
        assert present.all()
        assert masks[0, 0].sum() == 1
        assert masks[0, 0, 0, 0] == 1

    def test_presence(self, layout_factory):
        """Test absent objects have no slot flag"""
        layout = layout_factory([
            [(0, 'cat', 0, 0, 64, 64)],
            [(0, 'cat', 0, 0, 64, 64), (1, 'dog', 200, 200, 64, 64)],
        ])
        _, present, ids = layout_masks(layout, 8, 8)
        assert ids == (0, 1)
        assert present.tolist() == [[True, False], [True, True]]

    def test_attention_normalized(self, red_ball_dsl):
        """Test every attention slice is positive and sums to one"""
        state = init_substrate(red_ball_dsl, 8, 8, seed=3)
        attention = state.attention()
        assert (attention > 0).all()
        np.testing.assert_allclose(attention.sum(axis=(-2, -1)), 1.0)

    def test_too_few_frames(self, layout_factory):
        """Test a single-frame layout cannot be guided"""
        with pytest.raises(EmptyDsl):
            init_substrate(layout_factory([[(0, 'cat', 0, 0, 64, 64)]]), 8, 8, 0)

    def test_no_boxes(self, layout_factory):
        """Test a layout without boxes cannot be guided"""
        with pytest.raises(EmptyDsl):
            init_substrate(layout_factory([[], []]), 8, 8, 0)

    def test_bad_grid(self, red_ball_dsl):
        """Test a degenerate latent grid"""
        with pytest.raises(ShapeMismatch):
            init_substrate(red_ball_dsl, 1, 8, 0)

    def test_softmax_backward(self):
        """Test the softmax pullback against finite differences"""
        rng = np.random.default_rng(0)
        z = rng.standard_normal((1, 1, 3, 3))
        g = rng.standard_normal((1, 1, 3, 3))

        def softmax(x):
            e = np.exp(x - x.max())
            return e / e.sum()

        analytic = softmax_backward(softmax(z), g)
        numeric = np.zeros_like(z)
        h = 1e-6
        for index in np.ndindex(z.shape):
            up, down = z.copy(), z.copy()
            up[index] += h
            down[index] -= h
            numeric[index] = ((softmax(up) * g).sum() - (softmax(down) * g).sum()) / (2 * h)
        np.testing.assert_allclose(analytic, numeric, atol=1e-8)

    def test_natural_direction(self):
        """Test the natural direction is the pullback divided by the attention"""
        rng = np.random.default_rng(1)
        z = rng.standard_normal((2, 1, 4, 4))
        attention = np.exp(z) / np.exp(z).sum(axis=(-2, -1), keepdims=True)
        g = rng.standard_normal(z.shape)

        direction = natural_direction(attention, g)
        np.testing.assert_allclose(attention * direction, softmax_backward(attention, g), atol=1e-12)
        np.testing.assert_allclose((attention * direction).sum(axis=(-2, -1)), 0.0, atol=1e-12)
        with pytest.raises(ShapeMismatch):
            natural_direction(attention, g[:1])

    def test_positional_spread(self):
        """Test the spread of a single cell and of two neighbouring cells"""
        attention = np.zeros((2, 1, 4, 4))
        attention[0, 0, 2, 1] = 1.0
        attention[1, 0, 1, 1:3] = 0.5

        spread = positional_spread(attention)
        assert spread.shape == (2, 1, 1, 1)
        assert spread[0, 0, 0, 0] == pytest.approx(1.0 / 12.0)
        # x variance 0.25, y variance 0
        assert spread[1, 0, 0, 0] == pytest.approx(0.125 + 1.0 / 12.0)


class TestRunGuidance:
    """Tests for guided runs"""

    def test_red_ball_grounds(self, red_ball_dsl):
        """Test the red ball converges into its boxes at 32 x 32"""
        run = run_guidance(red_ball_dsl, H=32, W=32, seed=0)
        assert len(run.trace) == 50
        assert run.metrics.min_mass >= 0.85
        assert run.metrics.max_com_error <= 2.0

    def test_guidance_improves_on_baseline(self, red_ball_dsl):
        """Test guidance puts more mass in the boxes than the random start"""
        baseline = unguided_metrics(red_ball_dsl, 16, 16, seed=2)
        guided = run_guidance(red_ball_dsl, H=16, W=16, seed=2).metrics
        assert guided.mean_mass > baseline.mean_mass

    def test_zero_scale(self, red_ball_dsl):
        """Test a zero scale leaves the substrate untouched"""
        schedule = GuidanceSchedule(scale=0.0)
        run = run_guidance(red_ball_dsl, schedule=schedule, H=16, W=16, seed=4)
        assert run.state.equals(run.initial_state)
        baseline = unguided_metrics(red_ball_dsl, 16, 16, seed=4)
        assert run.metrics.to_dict() == baseline.to_dict()
        assert len(run.trace) == 50

    def test_reproducible(self, painting_dsl):
        """Test identical seeds give bit-identical states"""
        first = run_guidance(painting_dsl, H=16, W=16, seed=11)
        second = run_guidance(painting_dsl, H=16, W=16, seed=11)
        assert first.state.equals(second.state)
        assert first.energies == second.energies

    def test_seed_changes_start(self, painting_dsl):
        """Test different seeds start from different logits"""
        a = init_substrate(painting_dsl, 8, 8, 1)
        b = init_substrate(painting_dsl, 8, 8, 2)
        assert not a.equals(b)

    def test_unguided_tail(self, red_ball_dsl):
        """Test steps after the guided ones record nothing"""
        schedule = GuidanceSchedule(total_steps=40, guided_steps=2, repeats_per_step=3)
        run = run_guidance(red_ball_dsl, schedule=schedule, H=8, W=8, seed=0)
        assert [(row.step, row.repeat) for row in run.trace] == [
            (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)
        ]

    def test_iter_updates(self, red_ball_dsl):
        """Test the lazy update stream yields once per update"""
        simulator = GuidanceSimulator(red_ball_dsl, H=8, W=8, seed=0)
        updates = list(simulator.iter_updates())
        assert len(updates) == 50
        assert updates[-1].state is simulator.state

    def test_euclidean_geometry(self, red_ball_dsl):
        """Test the plain-gradient geometry steps along the logit gradient"""
        schedule = GuidanceSchedule(geometry='euclidean')
        simulator = GuidanceSimulator(red_ball_dsl, schedule=schedule, H=16, W=16, seed=0)
        breakdown, direction = simulator.step_direction(simulator.state)
        expected_breakdown, gradient = simulator.energy_and_logit_gradient(simulator.state)
        assert breakdown == expected_breakdown
        np.testing.assert_array_equal(direction, gradient)

        energies = simulator.run().energies
        assert energies[-1] < energies[0]

    def test_geometries_differ(self, red_ball_dsl):
        """Test the natural step is not the plain gradient"""
        natural = GuidanceSimulator(red_ball_dsl, H=16, W=16, seed=0)
        _, direction = natural.step_direction(natural.state)
        _, gradient = natural.energy_and_logit_gradient(natural.state)
        assert not np.allclose(direction, gradient)
        attention = natural.state.attention()
        np.testing.assert_allclose((attention * direction).sum(axis=(-2, -1)), 0.0, atol=1e-9)

    def test_energy_descends(self, red_ball_dsl):
        """Test the energy trace is non-increasing for most seeds at 32 x 32"""
        seeds = range(20)
        descending = 0
        for seed in seeds:
            energies = run_guidance(red_ball_dsl, H=32, W=32, seed=seed).energies
            if all(b <= a + 1e-9 for a, b in zip(energies, energies[1:])):
                descending += 1
        assert descending >= 0.95 * len(seeds)

    def test_static_box_pulls_com(self, layout_factory):
        """Test the attention CoM approaches a static box center"""
        layout = static_box_layout(layout_factory)
        center = np.array([8.0, 8.0])
        for seed in range(20):
            simulator = GuidanceSimulator(layout, H=16, W=16, seed=seed)
            distances = []
            for update in simulator.iter_updates():
                attention = update.state.attention()[0, 0]
                xs, ys = np.meshgrid(np.arange(16) + 0.5, np.arange(16) + 0.5)
                com = np.array([(attention * xs).sum(), (attention * ys).sum()])
                distances.append(float(np.linalg.norm(com - center)))
            tail = distances[10:]
            assert all(b <= a + 1e-3 for a, b in zip(tail, tail[1:]))
            assert tail[-1] < 1.0

    def test_custom_energy_config(self, red_ball_dsl):
        """Test the simulator honours the configured weights"""
        cfg = EnergyConfig(w_bg=2.0, com_weight=0.0, guidance_scale=3.0)
        simulator = GuidanceSimulator(red_ball_dsl, cfg=cfg, H=8, W=8)
        assert simulator.schedule.scale == 3.0
        assert simulator.run().trace[0].e_total == pytest.approx(simulator.trace[0].e_topk)


@pytest.mark.slow
class TestGuidanceStress:
    """Longer guidance checks"""

    @pytest.mark.parametrize("seed", range(5))
    def test_constant_velocity(self, layout_factory, seed):
        """Test attention follows a box sliding at constant speed"""
        layout = sliding_layout(layout_factory)
        run = run_guidance(layout, H=16, W=16, seed=seed)
        assert run.metrics.max_velocity_error <= 0.5
        assert run.metrics.min_mass >= 0.85

    def test_natural_step_tracks_motion(self, layout_factory):
        """Test the natural step follows a sliding box more closely than the plain gradient"""
        layout = sliding_layout(layout_factory)
        natural, euclidean = [], []
        for seed in range(5):
            natural.append(run_guidance(layout, H=16, W=16, seed=seed).metrics.mean_velocity_error)
            schedule = GuidanceSchedule(geometry='euclidean')
            run = run_guidance(layout, schedule=schedule, H=16, W=16, seed=seed)
            euclidean.append(run.metrics.mean_velocity_error)
        assert np.mean(natural) < np.mean(euclidean)

    def test_red_ball_many_seeds(self, red_ball_dsl):
        """Test the red ball grounds at 32 x 32 for 20 seeds"""
        for seed in range(20):
            metrics = run_guidance(red_ball_dsl, H=32, W=32, seed=seed).metrics
            assert metrics.min_mass >= 0.85
            assert metrics.max_com_error <= 2.0

    def test_com_weight_helps_slow_overlap(self, layout_factory):
        """Test the CoM term reduces velocity error when consecutive boxes overlap"""
        layout = sliding_layout(layout_factory, step=8)
        boxes = [frame.boxes[0] for frame in layout.frames]
        # consecutive boxes overlap by at least 70% IoU
        for first, second in zip(boxes, boxes[1:]):
            overlap = (first.w - abs(second.x - first.x)) * first.h
            assert overlap / (2 * first.w * first.h - overlap) >= 0.7

        results = com_weight_ablation(layout, weights=(0.0, 0.03), seeds=range(20), H=32, W=32)
        assert results[0.03] < results[0.0]

    def test_repeat_ablation(self, red_ball_dsl):
        """Test alignment rises with the repeat count and levels off by 5 repeats"""
        results = repeat_ablation(red_ball_dsl, repeats=(1, 3, 5, 7), seeds=range(5), H=32, W=32)
        assert set(results) == {1, 3, 5, 7}
        assert all(0.0 <= value <= 1.0 for value in results.values())
        assert results[1] <= results[3] <= results[5]
        assert abs(results[7] - results[5]) < 0.02

    def test_energy_descends_many_seeds(self, red_ball_dsl):
        """Test descent over 100 seeds"""
        descending = 0
        for seed in range(100):
            energies = run_guidance(red_ball_dsl, H=16, W=16, seed=seed).energies
            if all(b <= a + 1e-9 for a, b in zip(energies, energies[1:])):
                descending += 1
        assert descending >= 95
