import logging
import time
from typing import Dict

from notifypy import Notify

logger = logging.getLogger(__name__)

# last send time per command name
_NOTIFY_LAST: Dict[str, float] = {}
_NOTIFY_MIN_INTERVAL_SEC = 10.0

notifypy = Notify()


def _recently_notified(name: str, now: float) -> bool:
    last = _NOTIFY_LAST.get(name)
    return last is not None and now - last < _NOTIFY_MIN_INTERVAL_SEC


def safe_notify(name: str, message: str) -> None:
    """
    Desktop alert for a failed property check of command `name`.

    At most one alert per command every _NOTIFY_MIN_INTERVAL_SEC. A missing
    or broken notification backend never fails the run; it is logged instead.
    """
    now = time.time()
    if _recently_notified(name, now):
        logger.debug(f"Notification for {name} suppressed")
        return
    _NOTIFY_LAST[name] = now

    try:
        notify(message=message)
    except Exception as exc:  # notify-py backends raise assorted errors
        logger.warning(f"Desktop notification failed: {exc}")


def notify(message: str, title: str = "entroflow") -> None:
    notifypy.title = title
    notifypy.message = message
    notifypy.send()
