from virasoro.main import main

main()
