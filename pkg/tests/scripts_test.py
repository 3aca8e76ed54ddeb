"""
Test module for the framelab scripts
"""

import json
import os
import sys
import unittest

sys.path.append("..")

from scripts.setup_examples import export_examples  # noqa: E402


class TestExportExamples(unittest.TestCase):
    """
    Test case for the export_examples function
    """

    def setUp(self):
        """
        Set up the test environment
        """
        self.test_output_dir = "test_output"

    def tearDown(self):
        """
        Clean up the test environment
        """
        if os.path.exists(self.test_output_dir):
            for root, dirs, files in os.walk(
                self.test_output_dir, topdown=False
            ):
                for name in files:
                    os.remove(os.path.join(root, name))
                for name in dirs:
                    os.rmdir(os.path.join(root, name))
            os.rmdir(self.test_output_dir)

    def test_export_examples(self):
        """
        Test the export_examples function
        """
        written = export_examples(output_path=self.test_output_dir)

        self.assertEqual(len(written), 5)
        self.assertTrue(os.path.exists(self.test_output_dir))

        exported_file_path = os.path.join(
            self.test_output_dir, "sign-matrix.json"
        )
        self.assertTrue(os.path.exists(exported_file_path))

        with open(exported_file_path, "r", encoding="utf-8") as file:
            content = json.load(file)
        self.assertEqual(content["name"], "sign-matrix")
        self.assertEqual(content["expected"]["wpr"], "yes")
        self.assertEqual(content["vectors"][1], [-1, 1, 1])


if __name__ == "__main__":
    unittest.main()
