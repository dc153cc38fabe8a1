"""gad-studio command line: generate, render, validate, chat, and servers.

Every command is a thin wrapper over the library; the same functions back the
HTTP service, so outputs are identical either way.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .access import AnimationSpec, CacheIndex, DatasetClient
from .chat import (
    EndpointLlmClient,
    MockLlmClient,
    basic_generate,
    menu,
    new_session,
    run_loop,
)
from .gad import GadError, parse_gad, validate_gad
from .render import ReferenceBackend, RenderSettings, render_animation

DEFAULT_SERVER = "http://127.0.0.1:8801"
DEFAULT_CACHE = ".gad-cache"


def _parse_size(text: str):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise click.BadParameter(f"size must look like 256x256, got {text!r}")


def _settings(size: str) -> RenderSettings:
    w, h = _parse_size(size)
    return RenderSettings(width=w, height=h)


@click.group()
def cli():
    """Animation production for large time-varying volume data."""


@cli.command()
@click.option("--box", required=True, help="x1,y1,z1,x2,y2,z2 in base voxels")
@click.option("--time", "time_", required=True, help="t1,t2,step in timesteps")
@click.option("--quality", type=int, default=0, show_default=True)
@click.option("--field", required=True)
@click.option("--streamlines", is_flag=True, default=False)
@click.option("--dataset", default="mini-ocean", show_default=True)
@click.option("--server", default=DEFAULT_SERVER, show_default=True)
@click.option("--cache", default=DEFAULT_CACHE, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--size", default="256x256", show_default=True)
def generate(box, time_, quality, field, streamlines, dataset, server, cache, out, size):
    """Materialize a region-of-interest animation and render its frames."""
    try:
        coords = [int(v) for v in box.split(",")]
        t1, t2, step = (int(v) for v in time_.split(","))
    except ValueError:
        raise click.BadParameter("box and time must be comma-separated integers")
    if len(coords) != 6:
        raise click.BadParameter("box must be x1,y1,z1,x2,y2,z2")
    spec = AnimationSpec(
        box=(tuple(coords[:3]), tuple(coords[3:])),
        time=(t1, t2, step),
        quality=quality,
        field=field,
        streamlines=streamlines,
        dataset=dataset,
    )
    spec.validate()
    client = DatasetClient(base_url=server)
    aid, frames_dir = basic_generate(
        spec, client, CacheIndex(cache), _settings(size), frames_root=Path(out)
    )
    click.echo(f"animation {aid}")
    click.echo(f"frames in {frames_dir}")


@cli.command()
@click.argument("gad_root", type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--size", default="256x256", show_default=True)
@click.option("--format", "image_format", type=click.Choice(["ppm", "png"]),
              default="ppm", show_default=True)
def render(gad_root, out, size, image_format):
    """Render an existing GAD bundle to an image sequence."""
    doc = parse_gad(gad_root)
    paths = render_animation(
        doc, gad_root, _settings(size), ReferenceBackend(), Path(out),
        image_format=image_format,
    )
    click.echo(f"wrote {len(paths)} frames to {out}")


@cli.command()
@click.argument("gad_root", type=click.Path(exists=True, file_okay=False))
def validate(gad_root):
    """Check a GAD bundle against every format invariant."""
    try:
        doc = parse_gad(gad_root, strict=False)
    except GadError as exc:
        click.echo(f"error: {exc}")
        sys.exit(1)
    diagnostics = validate_gad(doc)
    for diag in diagnostics:
        click.echo(f"{diag.severity}: {diag.path}: {diag.message}")
    if any(d.severity == "error" for d in diagnostics):
        sys.exit(1)
    click.echo("valid")


@cli.command()
@click.option("--dataset", default="mini-ocean", show_default=True)
@click.option("--server", default=DEFAULT_SERVER, show_default=True)
@click.option("--cache", default=DEFAULT_CACHE, show_default=True)
@click.option("--size", default="256x256", show_default=True)
@click.option("--llm", type=click.Choice(["mock", "endpoint"]), default="mock", show_default=True)
@click.option("--llm-url", default="", help="chat-completions endpoint (with --llm endpoint)")
@click.option("--llm-key-env", default="LLM_API_KEY", show_default=True,
              help="environment variable holding the API key")
def chat(dataset, server, cache, size, llm, llm_url, llm_key_env):
    """Conversation-driven animation production."""
    client = DatasetClient(base_url=server)
    descriptor = client.descriptor(dataset)
    if llm == "endpoint":
        if not llm_url:
            raise click.BadParameter("--llm endpoint needs --llm-url")
        model_client = EndpointLlmClient(llm_url, api_key_env=llm_key_env)
    else:
        model_client = MockLlmClient(descriptor)
    cache_index = CacheIndex(cache)
    settings = _settings(size)
    session = new_session(descriptor)

    click.echo(f"dataset {descriptor.name}: fields {', '.join(descriptor.field_names())}")
    click.echo("options: 1-4 preset phenomena, 0 custom description, q quit")
    while True:
        raw = click.prompt("choice", default="q")
        if raw.strip().lower() in ("q", "quit", "exit"):
            break
        try:
            choice = int(raw)
        except ValueError:
            click.echo("enter 0-4 or q")
            continue
        try:
            if choice == 0:
                text = click.prompt("describe the animation")
                selection = menu(choice, text)
            else:
                selection = menu(choice)
        except Exception as exc:
            click.echo(f"error: {exc}")
            continue

        if selection.kind == "preset":
            click.echo(f"running preset: {selection.name}")
            aid, frames_dir = basic_generate(selection.spec, client, cache_index, settings)
            click.echo(f"animation {aid}\nframes in {frames_dir}")
            continue

        def ask(critique, spec):
            click.echo(f"critique: {critique.commentary}")
            if not critique.suggested_deltas:
                return False
            click.echo(f"suggested changes: {critique.suggested_deltas}")
            return click.confirm("apply and continue?", default=True)

        produced = run_loop(
            session, selection.text, model_client, client, cache_index, settings, ask
        )
        for aid, frames_dir in produced:
            click.echo(f"animation {aid}\nframes in {frames_dir}")


@cli.command("serve-data")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8801, show_default=True)
def serve_data(host, port):
    """Run the bundled synthetic dataset server."""
    import uvicorn

    from .access import create_dataset_app

    uvicorn.run(create_dataset_app(), host=host, port=port)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8800, show_default=True)
@click.option("--data-server", default=DEFAULT_SERVER, show_default=True)
@click.option("--cache", default=DEFAULT_CACHE, show_default=True)
@click.option("--size", default="256x256", show_default=True)
@click.option("--llm", type=click.Choice(["mock", "endpoint"]), default="mock", show_default=True)
@click.option("--llm-url", default="")
@click.option("--llm-key-env", default="LLM_API_KEY", show_default=True)
@click.option("--frontend", default="frontend/dist", show_default=True,
              help="static UI directory served at /ui when present")
def serve(host, port, data_server, cache, size, llm, llm_url, llm_key_env, frontend):
    """Run the animation service (jobs, frames, chat) over HTTP."""
    from .service import ServiceConfig
    from .service import serve as run_service

    w, h = _parse_size(size)
    config = ServiceConfig(
        dataset_server_url=data_server,
        cache_root=cache,
        llm=llm,
        llm_url=llm_url,
        llm_key_env=llm_key_env,
        width=w,
        height=h,
        frontend_dir=frontend,
    )
    run_service(config, host=host, port=port)


def main():
    cli()


if __name__ == "__main__":
    main()
