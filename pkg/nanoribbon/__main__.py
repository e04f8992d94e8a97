from nanoribbon.main import main

main()
