"""
Guidance Simulator - Energy-guided updates of the attention substrate
"""

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from energy.total import energy_terms_and_gradients
from guidance.metrics import grounding_metrics
from guidance.substrate import (
    init_substrate, layout_masks, natural_direction, positional_spread, softmax_backward
)
from logger_setup import LoggerMixin, log_execution_time
from models.guidance import (
    EUCLIDEAN_STEP, EnergyConfig, GroundingMetrics, GuidanceRun, GuidanceSchedule,
    SubstrateState, TraceRow
)
from models.layout import DynamicSceneLayout
from validation import ValidationError


@dataclass
class GuidanceUpdate:
    """One guidance update: the energy before it and the live state after it"""

    row: TraceRow
    state: SubstrateState


class GuidanceSimulator(LoggerMixin):
    """
    Runs the guidance schedule against a softmax substrate

    Before each of the first `guided_steps` sampling steps, `repeats_per_step`
    steps are taken on the logits:
    z <- z - sqrt(1 - alpha_bar_t) * scale * d,
    where d is the energy gradient shaped by the schedule's geometry (see
    step_direction). The remaining steps leave the substrate untouched, so
    all movement of attention mass comes from guidance.

    Energies are evaluated on attention_gain * softmax(z). The default gain
    H * W makes the uniform map equal to 1 everywhere, which keeps the top-k
    means on the same scale as per-pixel attention probabilities. CoM terms
    do not depend on the gain.
    """

    def __init__(
        self,
        dsl: DynamicSceneLayout,
        schedule: Optional[GuidanceSchedule] = None,
        cfg: Optional[EnergyConfig] = None,
        H: int = 32,
        W: int = 32,
        seed: int = 0,
        attention_gain: Optional[float] = None
    ):
        """
        Initialize simulator

        Args:
            dsl: Layout to ground
            schedule: Guidance schedule (the scale defaults to cfg.guidance_scale)
            cfg: Energy weights
            H: Latent height
            W: Latent width
            seed: Seed of the initial logits
            attention_gain: Multiplier applied to attention before the energy
        """
        self.dsl = dsl
        self.cfg = cfg or EnergyConfig()
        self.schedule = schedule or GuidanceSchedule(scale=self.cfg.guidance_scale)
        self.H, self.W = H, W
        self.seed = seed
        self.attention_gain = float(attention_gain) if attention_gain is not None else float(H * W)
        if self.attention_gain <= 0:
            raise ValidationError(f"attention gain must be positive, got {self.attention_gain}")

        self.state = init_substrate(dsl, H, W, seed)
        self.initial_state = self.state.copy()
        self.masks, self.present, _ = layout_masks(dsl, H, W)
        self.trace = []

    def _energy_terms(self, attention: np.ndarray):
        breakdown, topk_grad, com_grad = energy_terms_and_gradients(
            self.attention_gain * attention, self.masks, self.cfg, self.present
        )
        # chain rule through A = gain * a
        return breakdown, self.attention_gain * topk_grad, self.attention_gain * com_grad

    def energy_and_logit_gradient(self, state: SubstrateState):
        """Energy breakdown of a state and its gradient with respect to the logits"""
        attention = state.attention()
        breakdown, topk_grad, com_grad = self._energy_terms(attention)
        grad_logits = softmax_backward(attention, topk_grad + self.cfg.com_weight * com_grad)
        grad_logits[~self.present] = 0.0
        return breakdown, grad_logits

    def step_direction(self, state: SubstrateState):
        """
        Energy breakdown of a state and the direction its logits step against

        'euclidean' returns the plain logit gradient. Each cell's step is then
        weighted by its own attention, so a random start collapses onto its
        strongest cell within a few updates; the CoM gradient vanishes on a
        collapsed slice and cannot move it afterwards.

        'natural' (the default) divides the chained gradient by the attention
        (natural_direction) and the CoM gradient by each slice's positional
        spread, so one step moves the attention CoM by about
        step_size * com_weight * dE_com/dCoM whatever the attention's width.
        """
        if self.schedule.geometry == EUCLIDEAN_STEP:
            return self.energy_and_logit_gradient(state)

        attention = state.attention()
        breakdown, topk_grad, com_grad = self._energy_terms(attention)
        spread = positional_spread(attention)
        direction = natural_direction(attention, topk_grad + self.cfg.com_weight * com_grad / spread)
        direction[~self.present] = 0.0
        return breakdown, direction

    def iter_updates(self) -> Iterator[GuidanceUpdate]:
        """
        Apply the schedule lazily, yielding after every guidance update

        The yielded state is the simulator's live state; copy it to keep it.
        """
        for step in range(self.schedule.total_steps):
            if step >= self.schedule.guided_steps:
                continue
            step_size = self.schedule.step_size(step) * self.schedule.scale
            for repeat in range(self.schedule.repeats_per_step):
                breakdown, direction = self.step_direction(self.state)
                row = TraceRow(
                    step=step,
                    repeat=repeat,
                    e_topk=breakdown.e_topk,
                    e_com=breakdown.e_com,
                    e_total=breakdown.e_total
                )
                self.trace.append(row)
                if step_size > 0:
                    self.state.logits -= step_size * direction
                yield GuidanceUpdate(row=row, state=self.state)

    def metrics(self, state: Optional[SubstrateState] = None) -> GroundingMetrics:
        """Grounding metrics of a state (the current one by default)"""
        state = state or self.state
        return grounding_metrics(
            state.attention(), self.masks, self.present, state.object_ids, state.frame_indices
        )

    def run(self) -> GuidanceRun:
        """Run the whole schedule and return the final state, metrics and energy trace"""
        with log_execution_time(
            f"guidance on {self.dsl.frame_count} frames at {self.H}x{self.W}, seed {self.seed}",
            self.logger
        ):
            for _ in self.iter_updates():
                pass
        metrics = self.metrics()
        self.logger.info(
            f"seed {self.seed}: min mass {metrics.min_mass:.3f}, "
            f"max CoM error {metrics.max_com_error:.2f} cells"
        )
        return GuidanceRun(
            state=self.state,
            metrics=metrics,
            trace=list(self.trace),
            initial_state=self.initial_state
        )


def run_guidance(
    dsl: DynamicSceneLayout,
    schedule: Optional[GuidanceSchedule] = None,
    cfg: Optional[EnergyConfig] = None,
    H: int = 32,
    W: int = 32,
    seed: int = 0,
    attention_gain: Optional[float] = None
) -> GuidanceRun:
    """
    Ground a layout on a fresh substrate

    Raises:
        EmptyDsl: Layout has fewer than 2 frames or no boxes
        ShapeMismatch: Invalid latent grid
    """
    simulator = GuidanceSimulator(dsl, schedule, cfg, H, W, seed, attention_gain)
    return simulator.run()


def unguided_metrics(dsl: DynamicSceneLayout, H: int = 32, W: int = 32, seed: int = 0) -> GroundingMetrics:
    """Metrics of the initial random substrate (the no-guidance baseline)"""
    simulator = GuidanceSimulator(dsl, H=H, W=W, seed=seed)
    return simulator.metrics()
