from twdeligne.cli import main

main()
