import logging
import os
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler

import pytz
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    LOG_DIR: str = "logs"
    LOG_FILE: str = "hypersearch.log"
    LOG_LEVEL: str = "INFO"
    LOG_TIMEZONE: str = "Asia/Seoul"

    # dense 연산자 검증용 상한 (N_e = n * 2^n)
    DENSE_MAX_N: int = 9
    # 직접 시뮬레이션 상한
    SIMULATION_MAX_N: int = 22

    RESULTS_DIR: str = "results"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="HYPERSEARCH_",
        extra="ignore",
    )


settings = Settings()

_configured = False


def setup_logging():
    global _configured
    if _configured:
        return

    zone = pytz.timezone(settings.LOG_TIMEZONE)

    class ZonedFormatter(logging.Formatter):
        def formatTime(self, record, datefmt=None):
            dt = datetime.fromtimestamp(record.created, zone)
            if datefmt:
                return dt.strftime(datefmt)
            return dt.isoformat()

    formatter = ZonedFormatter(
        '[%(asctime)s] %(levelname)s [%(name)s:%(lineno)d] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S %Z'
    )

    os.makedirs(settings.LOG_DIR, exist_ok=True)
    file_handler = TimedRotatingFileHandler(
        filename=os.path.join(settings.LOG_DIR, settings.LOG_FILE),
        when='midnight',
        interval=1,
        backupCount=30,
        encoding='utf-8'
    )
    file_handler.setFormatter(formatter)

    # 콘솔 핸들러
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)

    # 루트 로거
    root_logger = logging.getLogger()
    root_logger.setLevel(settings.LOG_LEVEL)
    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)

    _configured = True
    logger.debug(f"Logging configured (dir={settings.LOG_DIR}, tz={settings.LOG_TIMEZONE})")
