"""
Shared fixtures
"""

import os
from pathlib import Path

import pytest

from config import reset_config
from dsl import parse_dsl
from logger_setup import LoggerSetup
from models import BoundingBox, DynamicSceneLayout, Frame
from prompting import load_examples


GOLDEN_DIR = Path(__file__).parent / 'golden'


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Every test starts from defaults, without a config file or LVD_* variables"""
    for key in list(os.environ):
        if key.startswith('LVD_'):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    reset_config()
    LoggerSetup.reset_logging()
    yield
    reset_config()
    LoggerSetup.reset_logging()


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


def _example_layout(name: str) -> DynamicSceneLayout:
    example = load_examples(names=[name])[0]
    return parse_dsl(example.dsl_text).layout


@pytest.fixture
def red_ball_dsl() -> DynamicSceneLayout:
    return _example_layout('red_ball')


@pytest.fixture
def painting_dsl() -> DynamicSceneLayout:
    return _example_layout('painting')


@pytest.fixture
def woman_man_dsl() -> DynamicSceneLayout:
    return _example_layout('woman_man')


@pytest.fixture
def rock_dsl() -> DynamicSceneLayout:
    return _example_layout('rock')


def make_layout(per_frame, background: str = 'scene') -> DynamicSceneLayout:
    """Layout from lists of (id, name, x, y, w, h) tuples, one list per frame"""
    return DynamicSceneLayout(
        frames=tuple(
            Frame(index=i + 1, boxes=tuple(BoundingBox(*box) for box in boxes))
            for i, boxes in enumerate(per_frame)
        ),
        background_keyword=background
    )


@pytest.fixture
def layout_factory():
    return make_layout
