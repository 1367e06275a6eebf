from sqorient.main import cli


def main():
    cli(prog_name="sqorient")


if __name__ == "__main__":
    main()
