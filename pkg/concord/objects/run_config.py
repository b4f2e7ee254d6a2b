from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from concord.abstract import Serializable
from concord.enums import StabilityRule
from concord.exceptions import InvalidData
from concord.objects.system_spec import SystemSpec

__all__ = (
    "RunConfig",
)

DEFAULT_MAX_STEPS = 10_000
DEFAULT_HORIZON = 100_000


@dataclass(frozen=True)
class RunConfig(Serializable):
    """
    Represents everything a command line run needs besides its subcommand arguments.

    Attributes
    ----------
        spec : :class:`concord.objects.SystemSpec`
            The market.
        rule : :class:`concord.enums.StabilityRule`
            Blocking rule for scans and dynamics.
        seed : int
            Seed for every random choice of the run.
        grid : Optional[tuple[float, ...]]
            Market sizes to sweep.
        output_path : Optional[str]
            Where CSV or trace output goes, stdout when absent.
        max_steps : int
            Step cap of the dynamics.
        horizon : int
            Arrivals per Monte-Carlo run.
        oracle : bool
            Whether pessimistic values are found by exhaustive enumeration.
    """
    spec: SystemSpec
    rule: StabilityRule = StabilityRule.RB_IA
    seed: int = 0
    grid: Optional[tuple[float, ...]] = None
    output_path: Optional[str] = None
    max_steps: int = DEFAULT_MAX_STEPS
    horizon: int = DEFAULT_HORIZON
    oracle: bool = field(default=False)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunConfig:
        """
        Creates a run configuration from a flat mapping.

        The system keys (``agents``, ``lambda``, ``mu``) are required; ``rule``, ``seed``,
        ``grid``, ``out``, ``max_steps``, ``horizon`` and ``oracle`` are optional.

        Raises
        ------
            InvalidData
                If the system is invalid or an optional value has the wrong type.

        Returns
        -------
            RunConfig
        """
        spec = SystemSpec.from_dict(data)
        try:
            rule = StabilityRule(data.get('rule', StabilityRule.RB_IA.value))
            grid = data.get('grid')
            return cls(
                spec=spec,
                rule=rule,
                seed=int(data.get('seed', 0)),
                grid=tuple(float(x) for x in grid) if grid is not None else None,
                output_path=data.get('out'),
                max_steps=int(data.get('max_steps', DEFAULT_MAX_STEPS)),
                horizon=int(data.get('horizon', DEFAULT_HORIZON)),
                oracle=bool(data.get('oracle', False)),
            )
        except (TypeError, ValueError) as error:
            raise InvalidData(f'Cannot build a run configuration: {error}') from error

    @property
    def raw(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            **self.spec.raw,
            'rule': self.rule.value,
            'seed': self.seed,
            'max_steps': self.max_steps,
            'horizon': self.horizon,
            'oracle': self.oracle,
        }
        if self.grid is not None:
            data['grid'] = list(self.grid)
        if self.output_path is not None:
            data['out'] = self.output_path
        return data

    def override(self, **changes: Any) -> RunConfig:
        """Returns a copy with every non-``None`` change applied."""
        return replace(self, **{key: value for key, value in changes.items() if value is not None})
