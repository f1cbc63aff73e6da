"""lognlw 的主入口点。"""

import logging
import sys

from .cli import run_cli
from .config import get_settings


def main() -> None:
    """配置日志并运行命令行。"""
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
