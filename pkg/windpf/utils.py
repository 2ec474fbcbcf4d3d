import os
import logging
from typing import Optional

BUNDLED_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')
GRIDS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'grids')

def _truthy(value: Optional[str]) -> bool:
    return (value or '').strip().lower() in ('1', 'true', 'yes', 'on')

def is_debug() -> bool:
    return _truthy(os.environ.get('WINDPF_DEBUG'))

def get_workers(default: Optional[int]=None) -> int:
    raw = os.environ.get('WINDPF_WORKERS')
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            logging.getLogger(__name__).warning('Ignoring non-integer WINDPF_WORKERS=%r', raw)
    if default is not None:
        return max(1, default)
    return max(1, min(4, os.cpu_count() or 1))

def get_seed_override() -> Optional[int]:
    raw = os.environ.get('WINDPF_SEED')
    if raw is None or raw == '':
        return None
    try:
        return int(raw)
    except ValueError:
        return None

def normalize_target(target: str, bundled_dir: str=BUNDLED_DIR) -> str:
    if not target:
        return target
    if os.path.exists(target):
        return target
    if not target.endswith(('.yaml', '.yml')):
        if os.path.exists(target + '.yaml'):
            return target + '.yaml'
        bundled = os.path.join(bundled_dir, os.path.basename(target) + '.yaml')
        if os.path.exists(bundled):
            return bundled
    return target

def setup_logging(level: Optional[int]=None):
    from rich.logging import RichHandler
    if level is None:
        level = logging.DEBUG if is_debug() else logging.WARNING
    root = logging.getLogger('windpf')
    root.setLevel(level)
    if not any((isinstance(h, RichHandler) for h in root.handlers)):
        root.addHandler(RichHandler(show_path=False, rich_tracebacks=is_debug()))
    return root
