import logging
from concurrent.futures import ThreadPoolExecutor

from config import Config

logger = logging.getLogger(__name__)


def get_executor(threads=None):
    """Returns a thread pool capped by FRACLAP_THREADS, or None when the run is serial."""
    threads = Config.THREADS if threads is None else threads
    if threads <= 1:
        logger.debug("Running serially.")
        return None
    logger.debug(f"Starting a pool of {threads} worker threads...")
    return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="fraclap")


def ordered_map(fn, items, threads=None):
    """Maps fn over items; results always come back in submission order."""
    items = list(items)
    executor = get_executor(threads)
    if executor is None:
        return [fn(item) for item in items]
    with executor:
        return list(executor.map(fn, items))
