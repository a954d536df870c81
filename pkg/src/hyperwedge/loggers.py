"""Log handlers that write into the platform user data directory."""

import logging.handlers
from pathlib import Path
import platformdirs

APP_NAME = "hyper_wedge"


def log_file_path(app_name: str = APP_NAME) -> Path:
    """Returns the path of the rotating log file.

    Args:
        app_name: Name of the application directory.
    Returns:
        Path: `<user data dir>/<app_name>/log.log`.
    """

    return Path(platformdirs.user_data_dir(app_name), "log.log")


class TimedRotatingFileHandler(logging.handlers.TimedRotatingFileHandler):
    """Rotates the package log on a timed basis.

    The log directory is created on first use, so the handler can be named
    directly in a `logging.config.fileConfig` file.
    """

    def __init__(self, *args, **kwargs):

        logpath = log_file_path()
        logpath.parent.mkdir(parents=True, exist_ok=True)

        super().__init__(logpath, *args, **kwargs)
