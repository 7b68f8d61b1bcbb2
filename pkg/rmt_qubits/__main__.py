# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Entry point for ``python -m rmt_qubits``."""

from . import main

if __name__ == "__main__":
    main()
