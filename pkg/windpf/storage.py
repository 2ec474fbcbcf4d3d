import io
import os
import time
import uuid
import logging
from typing import Dict, Optional
import msgpack
import numpy as np
import portalocker
import zstandard as zstd
from pydantic import BaseModel
from .concurrency import OutputLockManager
from .windsim import SimLog
logger = logging.getLogger(__name__)
HEADER = b'WPFLOG'
VERSION = 1
CSV_FORMAT = '%.12g'
ARCHIVE_EXT = '.wpfz'

def table_to_csv(columns, data: np.ndarray) -> bytes:
    buf = io.BytesIO()
    np.savetxt(buf, data, fmt=CSV_FORMAT, delimiter=',', header=','.join(columns), comments='')
    return buf.getvalue()

def log_to_csv(log: SimLog) -> bytes:
    return table_to_csv(log.columns, log.data)

def log_to_archive(log: SimLog, level: int=10) -> bytes:
    payload = {'columns': list(log.columns), 'rows': log.data.tolist(), 'meta': dict(log.meta)}
    packed = msgpack.packb(payload, use_bin_type=True)
    return HEADER + VERSION.to_bytes(2, 'big') + zstd.ZstdCompressor(level=level).compress(packed)

def load_archive(path: str) -> SimLog:
    with open(path, 'rb') as f:
        header = f.read(len(HEADER))
        if header != HEADER:
            raise ValueError(f'Invalid archive header in {path}')
        version = int.from_bytes(f.read(2), 'big')
        if version != VERSION:
            raise ValueError(f'Unsupported archive version: {version}')
        body = f.read()
    try:
        payload = msgpack.unpackb(zstd.ZstdDecompressor().decompress(body), raw=False)
    except (zstd.ZstdError, msgpack.exceptions.ExtraData, ValueError) as e:
        raise ValueError(f'Corrupt archive {path}: {e}')
    columns = tuple(payload['columns'])
    data = np.asarray(payload['rows'], dtype=np.float64).reshape(-1, len(columns))
    return SimLog(columns, data, dict(payload.get('meta') or {}))

def load_csv(path: str) -> SimLog:
    with open(path, 'r', encoding='utf-8') as f:
        header = f.readline().strip()
    if not header:
        raise ValueError(f'Empty log file {path}')
    columns = tuple(header.split(','))
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    if data.size == 0:
        data = data.reshape(0, len(columns))
    if data.shape[1] != len(columns):
        raise ValueError(f'{path}: {data.shape[1]} values per row but {len(columns)} columns')
    return SimLog(columns, data, {'name': os.path.basename(path).rsplit('_log', 1)[0]})

def load_log(path: str) -> SimLog:
    if path.endswith(ARCHIVE_EXT):
        return load_archive(path)
    return load_csv(path)

class LogStorage:
    """Writes per-scenario outputs into one directory, each file replaced atomically."""

    def __init__(self, out_dir: str, durable: bool=True):
        self.out_dir = out_dir
        self.durable = durable
        os.makedirs(out_dir, exist_ok=True)
        self.lock_manager = OutputLockManager(out_dir)

    def paths(self, name: str) -> Dict[str, str]:
        return {'log': os.path.join(self.out_dir, f'{name}_log.csv'), 'metrics': os.path.join(self.out_dir, f'{name}_metrics.json'), 'archive': os.path.join(self.out_dir, f'{name}_log{ARCHIVE_EXT}')}

    def _write_atomic(self, target: str, payload: bytes):
        temp_path = f'{target}.{uuid.uuid4().hex[:8]}.tmp'
        fd = os.open(temp_path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 384)
        with os.fdopen(fd, 'wb') as f:
            try:
                portalocker.lock(f, portalocker.LOCK_EX)
            except OSError:
                pass
            try:
                f.write(payload)
                f.flush()
                if self.durable:
                    try:
                        os.fsync(f.fileno())
                    except OSError:
                        pass
            finally:
                try:
                    portalocker.unlock(f)
                except OSError:
                    pass
        with self.lock_manager.critical_swap_lock():
            retries = 5
            while retries > 0:
                try:
                    os.replace(temp_path, target)
                    break
                except OSError:
                    retries -= 1
                    if retries == 0:
                        try:
                            os.remove(temp_path)
                        except OSError:
                            pass
                        raise
                    time.sleep(0.1)

    def save(self, log: SimLog, report: Optional[BaseModel]=None, archive: bool=False) -> Dict[str, str]:
        name = str(log.meta.get('name') or 'run')
        paths = self.paths(name)
        written = {}
        with self.lock_manager.writer_lock():
            self._write_atomic(paths['log'], log_to_csv(log))
            written['log'] = paths['log']
            if report is not None:
                self._write_atomic(paths['metrics'], report.model_dump_json(indent=2).encode('utf-8'))
                written['metrics'] = paths['metrics']
            if archive:
                self._write_atomic(paths['archive'], log_to_archive(log))
                written['archive'] = paths['archive']
        logger.debug('wrote %s', ', '.join(written.values()))
        return written

    def save_bytes(self, filename: str, payload: bytes) -> str:
        target = os.path.join(self.out_dir, filename)
        with self.lock_manager.writer_lock():
            self._write_atomic(target, payload)
        return target
