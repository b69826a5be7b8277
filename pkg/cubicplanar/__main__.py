from cubicplanar.cli import main

raise SystemExit(main())
