"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides our exceptions.

License:
::

    MIT License

    Copyright (c) 2025, 2026 SPAARC Simulator Contributors

    Permission is hereby granted, free of charge, to any person obtaining a copy
    of this software and associated documentation files (the "Software"), to deal
    in the Software without restriction, including without limitation the rights
    to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
    copies of the Software, and to permit persons to whom the Software is
    furnished to do so, subject to the following conditions:

    The above copyright notice and this permission notice shall be included in all
    copies or substantial portions of the Software.

    THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
    IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
    FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
    AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
    LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
    OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
    SOFTWARE.
"""

from typing import Optional


class SpaarcException(Exception):
    """
    Describes an exception raised by the simulator.

    :param message:
        The human readable message.
    :param key:
        The configuration key, parameter or object the error is about.
    """

    key: Optional[str] = None

    def __init__(self, message: str, *, key: Optional[str] = None) -> None:
        self.key = key
        super().__init__(message)

    def as_line(self) -> str:
        """
        Provides the one-line, machine-parseable representation of the error.
        """

        message = " ".join(str(self).split())

        return (
            f"error={self.__class__.__name__} key={self.key or '-'} "
            f"message={message}"
        )


class ParameterError(SpaarcException, ValueError):
    """
    Describes an out-of-range algorithm parameter.
    """


class CatalogMismatchError(SpaarcException, KeyError):
    """
    Describes a reference to an object which is not in the catalog.
    """

    def __str__(self) -> str:
        # KeyError quotes its argument otherwise.
        return Exception.__str__(self)


class CapacityError(SpaarcException):
    """
    Describes something which can't fit: an object in the cache or objects in
    a region.
    """


class TraceFormatError(SpaarcException):
    """
    Describes an unreadable trace, catalog, SPMF or ruleset file.
    """


class ConfigError(SpaarcException):
    """
    Describes an invalid configuration key or value.
    """


class ComparisonError(SpaarcException):
    """
    Describes two reports which can't be compared.
    """
