# archival_filtering/utils/decorators.py
# Revision No: 002
# Goals: Implement timing and performance logging decorators for sync and async callables.

import functools
import inspect
import logging
import os
import time
import traceback
from typing import Any, Callable

import psutil

logger = logging.getLogger(__name__)


def log_execution(func: Callable) -> Callable:
    """Log function execution with timing."""

    if inspect.iscoroutinefunction(func):
        @functools.wraps(func)
        async def async_wrapper(*args: Any, **kwargs: Any) -> Any:
            start_time = time.perf_counter()
            try:
                result = await func(*args, **kwargs)
                logger.info(f"{func.__name__} completed in {time.perf_counter() - start_time:.2f}s")
                return result
            except Exception as e:
                duration = time.perf_counter() - start_time
                logger.error(f"{func.__name__} failed after {duration:.2f}s: {e}\nTraceback:\n{traceback.format_exc()}")
                raise

        return async_wrapper

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            logger.info(f"{func.__name__} completed in {time.perf_counter() - start_time:.2f}s")
            return result
        except Exception as e:
            duration = time.perf_counter() - start_time
            logger.error(f"{func.__name__} failed after {duration:.2f}s: {e}\nTraceback:\n{traceback.format_exc()}")
            raise

    return wrapper


def measure_performance(perf_logger: logging.Logger):
    """Measure and log duration and resident-memory change of a coroutine."""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        async def wrapper(*args: Any, **kwargs: Any) -> Any:
            process = psutil.Process(os.getpid())
            start_time = time.perf_counter()
            start_memory = process.memory_info().rss

            try:
                result = await func(*args, **kwargs)
                duration = time.perf_counter() - start_time
                memory_diff = process.memory_info().rss - start_memory
                perf_logger.info(
                    f"Performance metrics for {func.__name__}:\n"
                    f"Duration: {duration:.2f}s\n"
                    f"Memory usage: {memory_diff / 1024 / 1024:.2f}MB"
                )
                return result
            except Exception as e:
                perf_logger.error(
                    f"Error in {func.__name__} after {time.perf_counter() - start_time:.2f}s: {str(e)}"
                )
                raise

        return wrapper

    return decorator

# Dependencies: functools, inspect, logging, os, time, traceback, typing, psutil
# Required Actions: None
# CLI Commands: None
