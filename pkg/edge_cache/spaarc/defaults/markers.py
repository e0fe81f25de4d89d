"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the regular expressions of our configuration grammar.

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

IGNORABLE_LINE_REGEX: str = r"^\s*(#.*)?$"
PAIR_LINE_REGEX: str = (
    r"^\s*(?P<key>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)"
    r"\s*=\s*(?P<value>[^#]*?)\s*(?:#.*)?$"
)
EMPTY_LIST_MARKER: str = "[]"
LIST_SEPARATOR: str = ","
NONE_MARKERS: tuple = ("none", "null", "")
TRUE_MARKERS: tuple = ("true", "yes", "on")
FALSE_MARKERS: tuple = ("false", "no", "off")
URL_REGEX: str = r"^https?://"
SPMF_METADATA_PREFIXES: tuple = ("@", "#", "%")
