from privbound.cli import main

main()
