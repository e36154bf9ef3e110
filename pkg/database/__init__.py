from .db_manager import DatabaseManager
from .base_repository import BaseRepository
from .run_repository import RunRepository
from .frame_record_repository import FrameRecordRepository

__all__ = ['DatabaseManager', 'BaseRepository', 'RunRepository', 'FrameRecordRepository']
