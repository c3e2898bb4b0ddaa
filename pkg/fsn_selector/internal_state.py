try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

try:
    from ptyx.shell import yellow
except ImportError:  # newer ptyx releases
    from ptyx.pretty_print import yellow
from tomli_w import dumps

import fsn_selector.param as param
from fsn_selector.errors import ValidationError

# Built-in values of the persisted defaults. The type of each value is enforced on update.
BUILTIN_DEFAULTS: dict[str, float | int] = {
    "h": param.DEFAULT_H,
    "t_end": param.DEFAULT_T_END,
    "k_end": param.DEFAULT_K_END,
    "eps": param.DEFAULT_EPS,
    "ratio_tol": param.DEFAULT_RATIO_TOL,
    "guard": param.DEFAULT_GUARD,
    "tol": param.DEFAULT_TOL,
    "u0": param.DEFAULT_INPUT,
    "seed": param.DEFAULT_SEED,
    "confirm_ticks": param.DEFAULT_CONFIRM_TICKS,
    "self_loop_weight": 1.0,
    "jobs": 0,
}


def _convert(key: str, value: Any) -> float | int:
    if key not in BUILTIN_DEFAULTS:
        raise ValidationError(f"Unknown setting {key!r} (valid settings: {', '.join(BUILTIN_DEFAULTS)}).")
    expected = type(BUILTIN_DEFAULTS[key])
    if isinstance(value, str):
        try:
            value = expected(value)
        except ValueError:
            raise ValidationError(f"Invalid value for {key!r}: {value!r}.") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"Invalid value for {key!r}: {value!r}.")
    if expected is int and not float(value).is_integer():
        raise ValidationError(f"Setting {key!r} must be an integer, not {value!r}.")
    return expected(value)


@dataclass(kw_only=True)
class State:
    """The persisted state of the command line tool.

    This includes the numerical defaults and recently used network files.
    """

    _recent_networks: list[Path] = field(default_factory=list)
    defaults: dict[str, float | int] = field(default_factory=lambda: dict(BUILTIN_DEFAULTS))

    def remember_network(self, new_path: Path) -> None:
        new_path = Path(new_path)
        # Paths are resolved, so that the same file does not appear twice in the list.
        self._recent_networks = [new_path] + [
            path for path in self._recent_networks if path.resolve() != new_path.resolve()
        ]
        del self._recent_networks[param.MAX_RECENT_FILES :]

    @property
    def recent_networks(self) -> Iterator[Path]:
        """Return an iterator over the recent networks, starting with the more recent one.

        The list is updated first, removing deleted files.
        """
        self._recent_networks = [path for path in self._recent_networks if path.is_file()]
        return iter(self._recent_networks)

    @property
    def last_network(self) -> Path | None:
        return next(self.recent_networks, None)

    def update_defaults(self, **values: Any) -> None:
        """Update the persisted defaults. Values may be given as strings."""
        converted = {key: _convert(key, value) for key, value in values.items()}
        self.defaults.update(converted)

    def _as_dict(self) -> dict[str, Any]:
        return {
            "recent_networks": [str(path) for path in self.recent_networks],
            "defaults": dict(self.defaults),
        }

    @classmethod
    def _from_dict(cls, d: dict[str, Any]) -> Self:
        state = cls(_recent_networks=[Path(s) for s in d.get("recent_networks", [])])
        try:
            state.update_defaults(**d.get("defaults", {}))
        except ValidationError as e:
            print(yellow(f"Invalid defaults in {param.CONFIG_PATH} ignored: {e}"))
        return state

    def save(self) -> Path:
        param.CONFIG_PATH.parent.mkdir(parents=True, exist_ok=True)
        settings_data = self._as_dict()
        toml = dumps(settings_data)
        assert tomllib.loads(toml) == settings_data
        param.CONFIG_PATH.write_text(toml, "utf8")
        if param.DEBUG:
            print(f"Config saved in {param.CONFIG_PATH}")
        return param.CONFIG_PATH

    @classmethod
    def load(cls) -> Self:
        try:
            settings_dict = tomllib.loads(param.CONFIG_PATH.read_text("utf8"))
        except FileNotFoundError:
            settings_dict = {}
        except (OSError, tomllib.TOMLDecodeError) as e:
            settings_dict = {}
            print(yellow(f"Unable to load state: {e!r}"))
        return cls._from_dict(settings_dict)
