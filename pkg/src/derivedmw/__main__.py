from .scenario_io import main

main()
