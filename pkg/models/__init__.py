"""
Layout Video Diffusion Toolkit - Domain Models
Data classes for layouts, prompts, guidance and benchmark records
"""

from .layout import (
    Canvas,
    BoundingBox,
    Frame,
    DynamicSceneLayout,
    Trajectory,
    TrajectorySample,
    OutOfBounds,
    Overlap,
    NonConsecutiveFrames,
    NameMismatch,
)
from .prompt import InContextExample, PromptBundle, ChatMessage
from .llm import LlmConfig, GenerationAttempt, GenerationResult
from .guidance import (
    EnergyConfig,
    EnergyBreakdown,
    GuidanceSchedule,
    SubstrateState,
    ObjectFrameMetric,
    GroundingMetrics,
    TraceRow,
    GuidanceRun,
    STEP_GEOMETRIES,
)
from .benchmark import BenchmarkTask, BenchmarkPrompt, Verdict, VerdictReport
from .physics import PhysicsVerdict

__all__ = [
    'Canvas',
    'BoundingBox',
    'Frame',
    'DynamicSceneLayout',
    'Trajectory',
    'TrajectorySample',
    'OutOfBounds',
    'Overlap',
    'NonConsecutiveFrames',
    'NameMismatch',
    'InContextExample',
    'PromptBundle',
    'ChatMessage',
    'LlmConfig',
    'GenerationAttempt',
    'GenerationResult',
    'EnergyConfig',
    'EnergyBreakdown',
    'GuidanceSchedule',
    'SubstrateState',
    'ObjectFrameMetric',
    'GroundingMetrics',
    'TraceRow',
    'GuidanceRun',
    'STEP_GEOMETRIES',
    'BenchmarkTask',
    'BenchmarkPrompt',
    'Verdict',
    'VerdictReport',
    'PhysicsVerdict',
]
