import os
import portalocker
from contextlib import contextmanager

class OutputLockManager:
    """Directory-level locks guarding output writes from concurrent batch workers."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.lock_path = os.path.join(out_dir, '.windpf.lock')
        self.write_lock_path = os.path.join(out_dir, '.windpf.writelock')

    @contextmanager
    def _locked(self, path: str):
        if not os.path.exists(path):
            try:
                with open(path, 'w'):
                    pass
            except OSError:
                pass
        try:
            f = open(path, 'r+')
        except OSError:
            # read-only or vanished directory: proceed unlocked
            yield
            return
        try:
            try:
                portalocker.lock(f, portalocker.LOCK_EX)
            except OSError:
                pass
            yield
        finally:
            try:
                portalocker.unlock(f)
            except OSError:
                pass
            f.close()

    @contextmanager
    def writer_lock(self):
        with self._locked(self.write_lock_path):
            yield

    @contextmanager
    def critical_swap_lock(self):
        with self._locked(self.lock_path):
            yield
