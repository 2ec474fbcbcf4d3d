from dataclasses import dataclass
from typing import List, Optional

class WPFError(Exception):
    pass

@dataclass(frozen=True)
class ConfigIssue:
    key: str
    message: str
    line: Optional[int] = None

    def __str__(self) -> str:
        where = f' (line {self.line})' if self.line is not None else ''
        return f'{self.key}{where}: {self.message}'

class ConfigError(WPFError):

    def __init__(self, issues: List[ConfigIssue], source: str=''):
        self.issues = list(issues)
        self.source = source
        head = f'Invalid config {source}' if source else 'Invalid config'
        super().__init__(head + ':\n' + '\n'.join((f'  - {i}' for i in self.issues)))

class SimulationError(WPFError):

    def __init__(self, message: str, t: Optional[float]=None):
        self.t = t
        if t is not None:
            message = f'{message} (t={t:.3f}s)'
        super().__init__(message)

class SaturationWarning(UserWarning):
    pass
