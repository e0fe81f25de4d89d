"""
SPAARC edge cache simulator - Association and proximity aware prefetching for
edge caches.

Provides the command line interface of our simulator.

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

import argparse
import logging
import sys
from typing import List, Optional

import colorama

import edge_cache.spaarc.defaults.envs
from edge_cache.spaarc.__about__ import __version__
from edge_cache.spaarc.config_manager import ConfigManager
from edge_cache.spaarc.exceptions import SpaarcException
from edge_cache.spaarc.orchestration import Orchestration

ACTIONS = {
    "generate": "Generate the workload files.",
    "run": "Replay a single cell and write its report.",
    "sweep": "Run the full experiment matrix.",
    "compare": "Recompute the comparison tables of a previous sweep.",
}


def get_parser() -> argparse.ArgumentParser:
    """
    Provides our argument parser.
    """

    common = argparse.ArgumentParser(add_help=False)

    common.add_argument(
        "-c",
        "--config",
        help="The configuration file to read.",
        default=None,
    )

    common.add_argument(
        "-o",
        "--out",
        help="The output directory. Defaults to $SPAARC_OUTPUT_DIR, then ./output.",
        default=None,
    )

    common.add_argument(
        "-s",
        "--seed",
        help="The seed to use. Overrides the configured seeds.",
        type=int,
        default=None,
    )

    common.add_argument(
        "-d",
        "--debug",
        help="Activate the logging in verbose mode.",
        action="store_true",
        default=False,
    )

    parser = argparse.ArgumentParser(
        description="A trace-driven simulator of association and proximity "
        "aware prefetching for edge caches.",
        epilog=f"Crafted with {colorama.Style.BRIGHT}{colorama.Fore.RED}♥"
        f"{colorama.Fore.RESET}{colorama.Style.RESET_ALL} "
        f"for {colorama.Style.BRIGHT}{colorama.Fore.CYAN}edge caches",
    )

    parser.add_argument(
        "-v",
        "--version",
        help="Show the version and exit.",
        action="version",
        version="%(prog)s " + __version__,
    )

    subparsers = parser.add_subparsers(dest="action", metavar="ACTION")
    subparsers.required = True

    for action, description in ACTIONS.items():
        subparsers.add_parser(action, help=description, parents=[common])

    return parser


def tool(args: Optional[List[str]] = None) -> None:
    """
    Provide our CLI.
    """

    colorama.init(autoreset=True)

    arguments = get_parser().parse_args(args)

    if arguments.debug or edge_cache.spaarc.defaults.envs.DEBUG:
        debug_level = logging.DEBUG
    else:
        debug_level = logging.INFO

    logging.basicConfig(
        format="[%(asctime)s::%(levelname)s] %(message)s", level=debug_level
    )

    logging.info("Simulator version: %s", __version__)

    overrides = {}

    if arguments.seed is not None:
        overrides["experiment.seeds"] = [arguments.seed]
        overrides["workload.seed"] = arguments.seed

    try:
        Orchestration(
            ConfigManager(arguments.config, overrides=overrides),
            output_dir=arguments.out or edge_cache.spaarc.defaults.envs.OUTPUT_DIR,
            action=arguments.action,
        )
    except SpaarcException as exception:
        print(exception.as_line(), file=sys.stderr)
        sys.exit(1)
