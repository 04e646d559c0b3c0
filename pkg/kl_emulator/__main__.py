from kl_emulator.main import main

main()
