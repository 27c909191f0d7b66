from tfpdiff.cli import main

raise SystemExit(main())
