"""lognlw 的进程级配置管理。"""

from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """进程配置。

    与运行配置（YAML 文档）不同，这里只放与单次计算无关的环境参数。
    所有字段都可以通过 LOGNLW_ 前缀的环境变量或 .env 文件覆盖。
    """

    model_config = SettingsConfigDict(
        env_prefix="LOGNLW_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # 日志级别
    log_level: str = "INFO"

    # 输出目录覆盖（优先级低于命令行参数，高于配置文件）
    output_dir: Optional[str] = None

    # 扫描任务的默认并发数
    max_workers: int = 4

    # 长时间积分时显示进度条
    show_progress: bool = False


@lru_cache()
def get_settings() -> Settings:
    """获取缓存的配置实例。"""
    return Settings()
