"""
main.py

Contains the `evid` entry point.

Every run is a hydra job; `command=<name>` picks the function from
`evidential.scripts.commands.COMMANDS`. Exit codes:
  0: success
  1: unexpected exception
  2: validation failure (bad input, bad configuration, missing `???` value)
  3: any other evidential runtime failure
"""
from __future__ import absolute_import, annotations, division, print_function
import logging
import sys
import warnings

import hydra
from omegaconf import DictConfig
from omegaconf.errors import MissingMandatoryValue

from evidential.errors import (
    ConvergenceWarning,
    EvidentialError,
    ValidationError,
)


log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID = 2
EXIT_RUNTIME = 3


def dispatch(cfg: DictConfig) -> dict:
    from evidential.scripts.commands import COMMANDS
    command = cfg.get('command', None)
    if command not in COMMANDS:
        raise ValidationError(
            f'Unknown command {command!r}; one of {sorted(COMMANDS)}'
        )
    if cfg.get('print_config', False):
        from evidential.utils.rich import print_config
        print_config(cfg, resolve=True)

    log.info(f'Running `{command}`')
    return COMMANDS[command](cfg)


def run(cfg: DictConfig) -> int:
    """Run one command and map its outcome to an exit code."""
    with warnings.catch_warnings():
        warnings.simplefilter('always', ConvergenceWarning)
        try:
            _ = dispatch(cfg)
        except (ValidationError, MissingMandatoryValue) as exc:
            log.error(f'Invalid input: {exc}')
            return EXIT_INVALID
        except EvidentialError as exc:
            log.error(f'{type(exc).__name__}: {exc}')
            return EXIT_RUNTIME
        except Exception:
            log.exception('Unexpected failure')
            return EXIT_UNEXPECTED

    return EXIT_OK


@hydra.main(config_path='./conf', config_name='config', version_base=None)
def main(cfg: DictConfig) -> None:
    code = run(cfg)
    if code != EXIT_OK:
        sys.exit(code)


if __name__ == '__main__':
    main()
