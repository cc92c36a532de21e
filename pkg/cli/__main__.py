from cli.main import cdtools

cdtools(prog_name="cdtools")
