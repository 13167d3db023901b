"""python -m rainbowbounds"""

from .cli import main

raise SystemExit(main())
