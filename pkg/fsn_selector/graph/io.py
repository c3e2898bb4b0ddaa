"""
Plain text formats.

Edge list (one arrow per line, information flows from `src` to `dst`):

    # comments start with '#'
    nodes 7
    selfloops 1.0      (optional: flags the network for discrete-time use;
                        a positive weight adds that self-loop to every node lacking one)
    root 1             (optional, spanning trees only)
    1 2 1.0            (src dst [weight], weight defaults to 1)

Leader file: lines "node delta", plus an optional line "input u0".

Schedule file: lines "t_start t_end u0 node:delta,node:delta".
"""

from pathlib import Path

from fsn_selector.errors import ValidationError
from fsn_selector.graph.network import (
    DirectedNetwork,
    InvalidEdgeError,
    LeaderProfile,
    LeaderSchedule,
    LeaderSegment,
    NetworkBuilder,
)


class NetworkFormatError(ValidationError):
    """Error raised when a text file can't be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _meaningful_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _to_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise NetworkFormatError(f"integer expected, got {token!r}.", line) from None


def _to_float(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise NetworkFormatError(f"number expected, got {token!r}.", line) from None


# ---------------------
#       Networks
# =====================


def parse_network(text: str) -> tuple[DirectedNetwork, dict[str, float]]:
    """Parse an edge list, returning the network and its optional headers ("root", "selfloops")."""
    builder: NetworkBuilder | None = None
    headers: dict[str, float] = {}
    for number, tokens in _meaningful_lines(text):
        match tokens:
            case ["nodes", n]:
                if builder is not None:
                    raise NetworkFormatError("duplicate 'nodes' header.", number)
                n_nodes = _to_int(n, number)
                if n_nodes < 1:
                    raise NetworkFormatError(f"number of nodes must be positive, not {n_nodes}.", number)
                builder = NetworkBuilder(n_nodes)
            case ["selfloops", w]:
                if builder is None:
                    raise NetworkFormatError("'nodes' header must come first.", number)
                headers["selfloops"] = weight = _to_float(w, number)
                if weight < 0:
                    raise NetworkFormatError(f"self-loop weight must be non-negative, not {weight}.", number)
                builder.allow_self_loops = True
            case ["root", node]:
                headers["root"] = _to_int(node, number)
            case [src, dst] | [src, dst, _]:
                if builder is None:
                    raise NetworkFormatError("'nodes' header must come first.", number)
                weight = _to_float(tokens[2], number) if len(tokens) == 3 else 1.0
                try:
                    builder.add_arrow(_to_int(src, number), _to_int(dst, number), weight)
                except InvalidEdgeError as e:
                    raise NetworkFormatError(str(e), number) from None
            case _:
                raise NetworkFormatError(f"can't parse {' '.join(tokens)!r}.", number)
    if builder is None:
        raise NetworkFormatError("missing 'nodes' header.")
    net = builder.build()
    if headers.get("selfloops", 0) > 0:
        net = net.with_self_loops(headers["selfloops"])
    return net, headers


def format_network(net: DirectedNetwork, root: int | None = None) -> str:
    lines = [f"nodes {net.n}"]
    loops = {i: w for i, j, w in net.edges() if i == j}
    uniform_loops = net.has_all_self_loops() and len(set(loops.values())) == 1
    if net.allow_self_loops:
        lines.append(f"selfloops {loops[1]!r}" if uniform_loops else "selfloops 0")
    if root is not None:
        lines.append(f"root {root}")
    for src, dst, w in sorted((j, i, w) for i, j, w in net.edges()):
        if src == dst and uniform_loops:
            continue
        lines.append(f"{src} {dst} {w!r}")
    return "\n".join(lines) + "\n"


def load_network(path: Path | str) -> DirectedNetwork:
    return parse_network(Path(path).read_text(encoding="utf8"))[0]


def save_network(net: DirectedNetwork, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(format_network(net), encoding="utf8")
    return path


# ---------------------
#        Leaders
# =====================


def parse_leaders(text: str, n: int, input_value: float = 0.1) -> LeaderProfile:
    deltas: dict[int, float] = {}
    for number, tokens in _meaningful_lines(text):
        match tokens:
            case ["input", value]:
                input_value = _to_float(value, number)
            case [node, delta]:
                node_id = _to_int(node, number)
                if node_id in deltas:
                    raise NetworkFormatError(f"duplicate leader {node_id}.", number)
                deltas[node_id] = _to_float(delta, number)
            case _:
                raise NetworkFormatError(f"can't parse {' '.join(tokens)!r}.", number)
    return LeaderProfile.from_mapping(n, deltas, input_value)


def parse_leader_spec(spec: str, n: int, input_value: float = 0.1) -> LeaderProfile:
    """Parse an inline leader specification like "1:1,5:1" (a missing δ means 1)."""
    deltas: dict[int, float] = {}
    for item in spec.replace(" ", "").split(","):
        if not item:
            continue
        node, _, delta = item.partition(":")
        try:
            deltas[int(node)] = float(delta) if delta else 1.0
        except ValueError:
            raise ValidationError(f"Invalid leader specification {item!r} (expected 'node:delta').") from None
    return LeaderProfile.from_mapping(n, deltas, input_value)


def format_leaders(profile: LeaderProfile) -> str:
    lines = [f"input {profile.input_value!r}"]
    lines += [f"{i} {profile.delta[i - 1]!r}" for i in sorted(profile.leaders)]
    return "\n".join(lines) + "\n"


def load_leaders(path: Path | str, n: int, input_value: float = 0.1) -> LeaderProfile:
    return parse_leaders(Path(path).read_text(encoding="utf8"), n, input_value)


def save_leaders(profile: LeaderProfile, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(format_leaders(profile), encoding="utf8")
    return path


# ---------------------
#       Schedules
# =====================


def parse_schedule(text: str, n: int) -> LeaderSchedule:
    segments = []
    for number, tokens in _meaningful_lines(text):
        if len(tokens) != 4:
            raise NetworkFormatError("expected 't_start t_end u0 node:delta,...'.", number)
        t_start, t_end, u0 = (_to_float(token, number) for token in tokens[:3])
        try:
            profile = parse_leader_spec(tokens[3], n, u0)
        except ValidationError as e:
            raise NetworkFormatError(str(e), number) from None
        segments.append(LeaderSegment(t_start, t_end, profile))
    return LeaderSchedule(tuple(segments))


def format_schedule(schedule: LeaderSchedule) -> str:
    lines = []
    for segment in schedule.segments:
        profile = segment.profile
        leaders = ",".join(f"{i}:{profile.delta[i - 1]!r}" for i in sorted(profile.leaders))
        lines.append(f"{segment.t_start!r} {segment.t_end!r} {profile.input_value!r} {leaders}")
    return "\n".join(lines) + "\n"


def load_schedule(path: Path | str, n: int) -> LeaderSchedule:
    return parse_schedule(Path(path).read_text(encoding="utf8"), n)


def save_schedule(schedule: LeaderSchedule, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(format_schedule(schedule), encoding="utf8")
    return path
