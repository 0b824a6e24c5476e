from uvreg.cli import main

main()
