from intertemporal.cli import main

raise SystemExit(main())
