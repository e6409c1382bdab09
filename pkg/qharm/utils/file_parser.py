import json
from pathlib import Path


class FileParser:
    @staticmethod
    def parse_json_file(file_input: Path):
        """
        Load a JSON document (map file or sweep config).

        Args:
            file_input (Path): Path to the JSON file.

        Returns:
            The decoded JSON value.

        Raises:
            FileNotFoundError: If the input path is not a valid file path.
            ValueError: If the file is not valid JSON.
        """
        file_input = Path(file_input)
        if not file_input.exists() or not file_input.is_file():
            raise FileNotFoundError(f"{file_input} is not a valid input path.")

        with open(file_input, "r", encoding="utf-8") as json_file:
            try:
                return json.load(json_file)
            except json.JSONDecodeError as e:
                raise ValueError(f"{file_input.name} is not valid JSON: {e}")
