"""Utilities for getting/setting the color theme"""
ColorMap = dict[str, str]
DEFAULT_THEME: ColorMap = {
    "box": "default",
    "header": "bold",
    "number": "cyan",
    "path": "blue",
    "ok": "bold green",
    "fail": "bold red",
    "warning": "yellow",
}


def get_colormap_from_string(string: str) -> ColorMap:
    """Given the text string return a tomocast ColorMap

    String is expected to be a colon-delimited (":") set of name=value pairs. So for
    example:

        "header=bold:warning=magenta:number=cyan"

    Values are stripped of whitespace. If the fields cannot be parsed a `ValueError`
    is raised. Empty names/values are ignored as are unrecognized names.
    """
    colormap = DEFAULT_THEME.copy()

    for assignment in filter(None, string.split(":")):
        name, equals, value = assignment.partition("=")

        if not equals or "=" in value:
            raise ValueError(f"Invalid color map: {string!r}")

        name, value = name.strip(), value.strip()

        if name and value and name in colormap:
            colormap[name] = value

    return colormap
