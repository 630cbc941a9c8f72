"""
Layout Video Diffusion Toolkit - Configuration Management
Centralized configuration with config-file and environment variable support
"""

from pathlib import Path
from typing import Any, Dict, Optional
import json
import os
from dataclasses import dataclass, field

from models.guidance import STEP_GEOMETRIES
from models.llm import LlmConfig
from validation import ConfigurationError, ValidationError, Validator


ENV_PREFIX = 'LVD_'
DEFAULT_CONFIG_FILE = 'lvd_config.json'


@dataclass
class LoggingConfig:
    """Logging configuration settings"""
    log_level: str = 'WARNING'
    log_file: Optional[Path] = None
    log_to_console: bool = True
    log_format: str = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    max_log_size_mb: int = 10
    backup_count: int = 5

    def validate(self) -> None:
        """Validate logging configuration"""
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if self.log_level.upper() not in valid_levels:
            raise ConfigurationError(f"Log level must be one of {valid_levels}")

        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)


@dataclass
class GuidanceConfig:
    """Guidance simulator defaults (energy weights and schedule)"""
    latent_size: int = 32
    total_steps: int = 40
    guided_steps: int = 10
    repeats_per_step: int = 5
    guidance_scale: float = 5.0
    w_fg: float = 1.0
    w_bg: float = 4.0
    topk_fraction: float = 0.75
    com_weight: float = 0.03
    interpolate_to: int = 0
    seed: int = 0
    step_geometry: str = 'natural'

    def validate(self) -> None:
        """Validate guidance configuration"""
        try:
            Validator.validate_integer(self.latent_size, "latent_size", min_value=2)
            Validator.validate_integer(self.total_steps, "total_steps", min_value=1)
            Validator.validate_integer(
                self.guided_steps, "guided_steps", min_value=0, max_value=self.total_steps
            )
            Validator.validate_integer(self.repeats_per_step, "repeats_per_step", min_value=1)
            Validator.validate_float(self.guidance_scale, "guidance_scale", min_value=0.0)
            Validator.validate_float(self.w_fg, "w_fg", min_value=0.0, exclusive_min=True)
            Validator.validate_float(self.w_bg, "w_bg", min_value=0.0, exclusive_min=True)
            Validator.validate_float(
                self.topk_fraction, "topk_fraction", min_value=0.0, max_value=1.0, exclusive_min=True
            )
            Validator.validate_float(self.com_weight, "com_weight", min_value=0.0)
            Validator.validate_integer(self.interpolate_to, "interpolate_to", min_value=0)
            self.step_geometry = Validator.validate_choice(
                self.step_geometry, "step_geometry", STEP_GEOMETRIES, case_sensitive=False
            )
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e


@dataclass
class BenchmarkConfig:
    """Benchmark suite and runner settings"""
    seed: int = 0
    prompts_per_task: int = 100
    generations_per_prompt: int = 2
    jobs: int = 1
    examples: int = 3
    displacement_fraction: float = 0.25

    def validate(self) -> None:
        """Validate benchmark configuration"""
        try:
            Validator.validate_integer(self.prompts_per_task, "prompts_per_task", min_value=1)
            Validator.validate_integer(
                self.generations_per_prompt, "generations_per_prompt", min_value=1
            )
            Validator.validate_integer(self.jobs, "jobs", min_value=1)
            Validator.validate_choice(self.examples, "examples", [1, 3, 5])
            Validator.validate_float(
                self.displacement_fraction, "displacement_fraction", min_value=0.0, max_value=1.0
            )
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e


@dataclass
class PathsConfig:
    """Filesystem locations"""
    cache_dir: Path = field(default_factory=lambda: Path('cache'))
    output_dir: Path = field(default_factory=lambda: Path('out'))
    replay_dir: Optional[Path] = None

    def validate(self) -> None:
        """Validate path configuration"""
        if self.cache_dir.exists() and not self.cache_dir.is_dir():
            raise ConfigurationError(f"Cache path is not a directory: {self.cache_dir}")


class Config:
    """Main configuration class"""

    def __init__(self, base_dir: Optional[Path] = None, config_file: Optional[Path] = None):
        """
        Initialize configuration

        Values resolve as environment (LVD_*) over the JSON config file over
        defaults; command-line flags are applied on top by the CLI.

        Args:
            base_dir: Base directory for relative paths (defaults to the working directory)
            config_file: JSON config file (defaults to LVD_CONFIG_FILE or lvd_config.json)
        """
        self.base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
        self.config_file = self._locate_config_file(config_file)
        self._file_values = self._load_config_file(self.config_file)

        self.logging = self._init_logging_config()
        self.llm = self._init_llm_config()
        self.guidance = self._init_guidance_config()
        self.benchmark = self._init_benchmark_config()
        self.paths = self._init_paths_config()

        self.validate()

    def _locate_config_file(self, config_file: Optional[Path]) -> Optional[Path]:
        """Find the JSON config file, if any"""
        if config_file is not None:
            return Path(config_file)
        env_path = os.getenv(f'{ENV_PREFIX}CONFIG_FILE')
        if env_path:
            return Path(env_path)
        candidate = self.base_dir / DEFAULT_CONFIG_FILE
        return candidate if candidate.exists() else None

    @staticmethod
    def _load_config_file(path: Optional[Path]) -> Dict[str, Dict[str, Any]]:
        """Read the sectioned JSON config file"""
        if path is None:
            return {}
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigurationError(f"Config file not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {path} must hold a JSON object")
        return data

    def _value(self, section: str, key: str, default: Any, cast=str) -> Any:
        """Resolve one setting: environment, then config file, then default"""
        env_value = os.getenv(f'{ENV_PREFIX}{key.upper()}')
        if env_value is not None and env_value != '':
            raw = env_value
        else:
            raw = self._file_values.get(section, {}).get(key, default)
        if raw is None:
            return None
        if cast is bool:
            if isinstance(raw, bool):
                return raw
            return str(raw).lower() in ('1', 'true', 'yes', 'on')
        try:
            return cast(raw)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid value for {section}.{key}: {raw!r}") from e

    def _path(self, section: str, key: str, default: Optional[str]) -> Optional[Path]:
        raw = self._value(section, key, default)
        if raw is None:
            return None
        path = Path(raw)
        return path if path.is_absolute() else self.base_dir / path

    def _init_logging_config(self) -> LoggingConfig:
        """Initialize logging configuration"""
        return LoggingConfig(
            log_level=self._value('logging', 'log_level', 'WARNING'),
            log_file=self._path('logging', 'log_file', None),
            log_to_console=self._value('logging', 'log_to_console', True, bool),
            max_log_size_mb=self._value('logging', 'max_log_size_mb', 10, int),
            backup_count=self._value('logging', 'log_backup_count', 5, int)
        )

    def _init_llm_config(self) -> LlmConfig:
        """Initialize LLM endpoint configuration"""
        return LlmConfig(
            endpoint=self._value('llm', 'endpoint', LlmConfig.endpoint),
            model=self._value('llm', 'model', LlmConfig.model),
            temperature=self._value('llm', 'temperature', LlmConfig.temperature, float),
            max_tokens=self._value('llm', 'max_tokens', LlmConfig.max_tokens, int),
            api_key_env=self._value('llm', 'api_key_env', LlmConfig.api_key_env),
            timeout=self._value('llm', 'timeout', LlmConfig.timeout, float),
            max_attempts=self._value('llm', 'max_attempts', LlmConfig.max_attempts, int)
        )

    def _init_guidance_config(self) -> GuidanceConfig:
        """Initialize guidance configuration"""
        defaults = GuidanceConfig()
        return GuidanceConfig(
            latent_size=self._value('guidance', 'latent_size', defaults.latent_size, int),
            total_steps=self._value('guidance', 'total_steps', defaults.total_steps, int),
            guided_steps=self._value('guidance', 'guided_steps', defaults.guided_steps, int),
            repeats_per_step=self._value(
                'guidance', 'repeats_per_step', defaults.repeats_per_step, int
            ),
            guidance_scale=self._value(
                'guidance', 'guidance_scale', defaults.guidance_scale, float
            ),
            w_fg=self._value('guidance', 'w_fg', defaults.w_fg, float),
            w_bg=self._value('guidance', 'w_bg', defaults.w_bg, float),
            topk_fraction=self._value('guidance', 'topk_fraction', defaults.topk_fraction, float),
            com_weight=self._value('guidance', 'com_weight', defaults.com_weight, float),
            interpolate_to=self._value(
                'guidance', 'interpolate_to', defaults.interpolate_to, int
            ),
            seed=self._value('guidance', 'guidance_seed', defaults.seed, int),
            step_geometry=self._value('guidance', 'step_geometry', defaults.step_geometry)
        )

    def _init_benchmark_config(self) -> BenchmarkConfig:
        """Initialize benchmark configuration"""
        defaults = BenchmarkConfig()
        return BenchmarkConfig(
            seed=self._value('benchmark', 'bench_seed', defaults.seed, int),
            prompts_per_task=self._value(
                'benchmark', 'prompts_per_task', defaults.prompts_per_task, int
            ),
            generations_per_prompt=self._value(
                'benchmark', 'generations_per_prompt', defaults.generations_per_prompt, int
            ),
            jobs=self._value('benchmark', 'jobs', defaults.jobs, int),
            examples=self._value('benchmark', 'examples', defaults.examples, int),
            displacement_fraction=self._value(
                'benchmark', 'displacement_fraction', defaults.displacement_fraction, float
            )
        )

    def _init_paths_config(self) -> PathsConfig:
        """Initialize filesystem paths"""
        return PathsConfig(
            cache_dir=self._path('paths', 'cache_dir', 'cache'),
            output_dir=self._path('paths', 'output_dir', 'out'),
            replay_dir=self._path('paths', 'replay_dir', None)
        )

    def validate(self) -> None:
        """Validate all configuration settings"""
        self.logging.validate()
        try:
            self.llm.validate()
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e
        self.guidance.validate()
        self.benchmark.validate()
        self.paths.validate()

    def to_dict(self) -> dict:
        """Convert configuration to dictionary"""
        return {
            'config_file': str(self.config_file) if self.config_file else None,
            'logging': {
                'log_level': self.logging.log_level,
                'log_file': str(self.logging.log_file) if self.logging.log_file else None,
                'log_to_console': self.logging.log_to_console
            },
            'llm': self.llm.to_dict(),
            'guidance': dict(vars(self.guidance)),
            'benchmark': dict(vars(self.benchmark)),
            'paths': {
                'cache_dir': str(self.paths.cache_dir),
                'output_dir': str(self.paths.output_dir),
                'replay_dir': str(self.paths.replay_dir) if self.paths.replay_dir else None
            }
        }


# Global configuration instance
_config: Optional[Config] = None


def get_config(base_dir: Optional[Path] = None, config_file: Optional[Path] = None) -> Config:
    """
    Get the global configuration instance

    Args:
        base_dir: Base directory for relative paths
        config_file: Explicit JSON config file

    Returns:
        Config instance
    """
    global _config
    if _config is None:
        _config = Config(base_dir, config_file)
    return _config


def reset_config() -> None:
    """Reset the global configuration (mainly for testing)"""
    global _config
    _config = None
