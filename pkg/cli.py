"""thicklinks command line: thickness of curve files, Hopf lifts, torus knots, disk packings on S²,
bialy lattices, revolved packings, the full reproduction report and tube mesh export.

Exit codes: 0 pass, 1 numerical failure, 2 inconclusive Monte Carlo, 3 input error.
"""
import functools
import logging
import math
import sys

import click

import formats
import settings
from curves import curve_length, euclidean_thickness, link_length, spherical_thickness
from errors import InputError, ThickLinksError
from hopf_links import (aspect_sweep, hopf_link_density, hopf_link_mc_density, hopf_link_thickness,
                        lift_configuration, optimize_aspect, torus_knot_curve)
from lattice_packing import (NAMED_LATTICES, analytic_density, bialy_volume_report, hexagonal_cylinder_density,
                             monte_carlo_density, named_lattice, verify_nonoverlap)
from mesh import lattice_block_meshes, link_meshes, torus_mesh, write_obj
from models import Ambient, DiscreteLink, RunConfig, TorusKnotSpec
from report import exit_status, reference_report
from revolved_packing import revolved_density_profile, revolved_mc_report
from s2_packing import (SCAN_NOTE, density_scan, optimize_maximin, packing_density, packing_radius,
                        regular_configuration)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2

BOUND_TOL = 1e-3


def command_boundary(fn):
    """Run a command, log library errors and turn them into exit codes"""
    @functools.wraps(fn)
    @click.pass_context
    def wrapper(ctx, *args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except ThickLinksError as e:
            logging.error(f"{ctx.command_path}: {e}")
            click.echo(f"error: {e}", err=True)
            ctx.exit(e.exit_code)
        ctx.exit(code or EXIT_PASS)
    return wrapper


def output_options(fn):
    fn = click.option('--format', 'output_format', type=click.Choice(formats.OUTPUT_FORMATS),
                      default='table', show_default=True, help='Output format')(fn)
    fn = click.option('--out', 'out', type=click.Path(dir_okay=False), default=None,
                      help='Write output here instead of stdout')(fn)
    return fn


def mc_options(fn):
    fn = click.option('--seed', type=int, default=settings.DEFAULT_SEED, show_default=True,
                      help='Random seed')(fn)
    fn = click.option('--samples', type=int, default=settings.DEFAULT_SAMPLES, show_default=True,
                      help='Monte Carlo samples')(fn)
    return fn


def _tolerances():
    return {
        'contact': settings.CONTACT_TOL,
        'fiber_agreement': settings.FIBER_AGREEMENT_TOL,
        'mc_sigmas': settings.MC_SIGMAS,
        'mc_resolution': settings.MC_RESOLUTION,
    }


def emit(rows, run, columns=None, extra=None):
    metadata = run.metadata()
    if extra:
        metadata.update(extra)
    text = formats.render(rows, run.output_format, metadata, columns)
    if run.output_path:
        formats.write_text(text, run.output_path)
    else:
        click.echo(text, nl=False)


def _run(command, output_format, out, seed=None, samples=None, input_path=None):
    return RunConfig(
        command=command,
        seed=settings.DEFAULT_SEED if seed is None else seed,
        samples=settings.DEFAULT_SAMPLES if samples is None else samples,
        tolerances=_tolerances(),
        input_path=input_path,
        output_path=out,
        output_format=output_format,
    )


def _mc_status(report, agrees, scale=1.0):
    if report.half_width > settings.MC_RESOLUTION * scale:
        logging.warning(f"Monte Carlo half-width {report.half_width:.3g} exceeds "
                        f"{settings.MC_RESOLUTION * scale:.3g}; result inconclusive")
        return EXIT_INCONCLUSIVE
    return EXIT_PASS if agrees else EXIT_FAIL


def _load_config(points, config):
    if points and config:
        raise InputError("give either --points or --config, not both")
    if points:
        return formats.read_config_json(points)
    return regular_configuration(config or "antipodal")


class ThickLinksGroup(click.Group):
    """Command group whose usage errors (bad options, missing files) exit with the input-error code"""

    def main(self, *args, standalone_mode=True, **kwargs):
        try:
            code = super().main(*args, standalone_mode=False, **kwargs)
        except click.UsageError as e:
            e.exit_code = InputError.exit_code
            if not standalone_mode:
                raise
            e.show()
            sys.exit(e.exit_code)
        except click.ClickException as e:
            if not standalone_mode:
                raise
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            if not standalone_mode:
                raise
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_FAIL)
        if standalone_mode:
            sys.exit(code or EXIT_PASS)
        return code


@click.group(cls=ThickLinksGroup)
@click.version_option(settings.VERSION, prog_name="thicklinks")
@click.option('--log-level', default=settings.LOG_LEVEL, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Thick knots, links and packing densities."""
    logging.basicConfig(level=getattr(logging, log_level.upper()),
                        format='%(asctime)s %(levelname)s %(message)s', stream=sys.stderr)


@cli.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--ambient', type=click.Choice([a.value for a in Ambient]), default=None,
              help='Expected ambient space of the file')
@click.option('--method', type=click.Choice(['pruned', 'brute']), default='pruned', show_default=True)
@output_options
@command_boundary
def thickness(path, ambient, method, output_format, out):
    """Length, thickness and ropelength of a curve file (JSON or CSV)."""
    link = formats.read_curve(path)
    if ambient and link.ambient.value != ambient:
        raise InputError(f"{path} holds an {link.ambient.value} curve, not {ambient}")
    run = _run("thickness", output_format, out, input_path=path)

    row = {'components': len(link.components), 'samples': link.total_samples}
    if link.ambient is Ambient.EUCLIDEAN:
        length, value = link_length(link), euclidean_thickness(link, method)
        row.update({'length': length, 'thickness': value, 'ropelength': length / value})
    else:
        value = spherical_thickness(link, method)
        note = ""
        if abs(value - math.pi / 2) <= BOUND_TOL:
            note = "attains the round-circle bound pi/2"
        elif len(link.components) > 1 and abs(value - math.pi / 4) <= BOUND_TOL:
            note = "attains Hopf bound pi/4"
        row.update({'length': link_length(link), 'thickness': value, 'note': note})
    emit([row], run)


@cli.command('hopf-lift')
@click.option('--points', type=click.Path(exists=True, dir_okay=False), default=None,
              help='S² configuration JSON')
@click.option('--config', type=click.Choice(['antipodal', 'triangle', 'tetrahedron', 'octahedron', 'icosahedron']),
              default=None, help='Named configuration (default antipodal)')
@click.option('--samples', type=int, default=256, show_default=True, help='Samples per fiber')
@click.option('--curve-out', type=click.Path(dir_okay=False), default=None, help='Write the lifted link as JSON')
@output_options
@command_boundary
def hopf_lift(points, config, samples, curve_out, output_format, out):
    """Lift an S² configuration to a Hopf link and check its thickness both ways."""
    base = _load_config(points, config)
    link = lift_configuration(base, samples)
    run = _run("hopf-lift", output_format, out, samples=samples, input_path=points)
    result = hopf_link_thickness(link)
    if curve_out:
        formats.write_text(formats.curve_json(link.link, run.metadata()), curve_out)
    emit([{'components': base.n, 'samples_per_fiber': samples, 'closed_form': result.closed_form,
           'sampled': result.sampled, 'discrepancy': result.discrepancy, 'agree': result.agree}], run)


@cli.command('hopf-density')
@click.option('--points', type=click.Path(exists=True, dir_okay=False), default=None)
@click.option('--config', type=click.Choice(['antipodal', 'triangle', 'tetrahedron', 'octahedron', 'icosahedron']),
              default=None)
@mc_options
@output_options
@command_boundary
def hopf_density(points, config, seed, samples, output_format, out):
    """Volume fraction of S³ filled by a thick Hopf link, against the base packing density."""
    base = _load_config(points, config)
    link = lift_configuration(base, settings.MIN_CURVE_SAMPLES)
    run = _run("hopf-density", output_format, out, seed, samples, points)
    report = hopf_link_mc_density(link, samples, seed)
    radius = packing_radius(base)
    emit([{'components': base.n, 'hopf_density': hopf_link_density(link),
           'base_density': packing_density(base.n, radius), **report.as_dict()}], run)
    return _mc_status(report, report.agrees())


@cli.command('torus-knot')
@click.option('--m', 'm', type=int, default=3, show_default=True, help='Odd winding number')
@click.option('--aspect', type=float, default=1.0 / math.sqrt(2.0), show_default=True)
@click.option('--samples', type=int, default=256, show_default=True)
@click.option('--sweep', is_flag=True, help='Tabulate thickness over the aspect grid')
@click.option('--optimize', is_flag=True, help='Find the aspect with the thickest knot')
@click.option('--grid', type=int, default=64, show_default=True)
@click.option('--curve-out', type=click.Path(dir_okay=False), default=None)
@output_options
@command_boundary
def torus_knot(m, aspect, samples, sweep, optimize, grid, curve_out, output_format, out):
    """(m,2) torus knots on Clifford tori."""
    run = _run("torus-knot", output_format, out, samples=samples)
    if sweep:
        emit([{'aspect': a, 'thickness': t} for a, t in aspect_sweep(m, samples, grid)], run)
        return
    if optimize:
        best, value = optimize_aspect(m, samples, grid)
        emit([{'m': m, 'aspect': best, 'thickness': value, 'grid': grid}], run)
        return
    curve = torus_knot_curve(TorusKnotSpec(m, aspect, samples))
    link = DiscreteLink.of(curve)
    if curve_out:
        formats.write_text(formats.curve_json(link, run.metadata()), curve_out)
    emit([{'m': m, 'aspect': aspect, 'length': curve_length(curve), 'thickness': spherical_thickness(link)}], run)


@cli.command()
@click.option('--n', 'n', type=int, default=None, help='Optimize a single n instead of scanning')
@click.option('--n-max', type=int, default=12, show_default=True)
@click.option('--seed', type=int, default=settings.DEFAULT_SEED, show_default=True)
@click.option('--restarts', type=int, default=8, show_default=True)
@click.option('--iters', type=int, default=400, show_default=True)
@click.option('--config-out', type=click.Path(dir_okay=False), default=None,
              help='With --n, write the configuration as JSON')
@output_options
@command_boundary
def tammes(n, n_max, seed, restarts, iters, config_out, output_format, out):
    """Maximin disk packings of S² and their densities against the hexagonal density."""
    run = _run("tammes", output_format, out, seed=seed)
    extra = {'restarts': restarts, 'iters': iters}
    if n is not None:
        result = optimize_maximin(n, seed, restarts, iters)
        if config_out:
            formats.write_text(formats.config_json(result.config, run.metadata()), config_out)
        summary = result.summary
        emit([{'n': n, 'r_hat': summary.radius, 'rho_hat': summary.density, 'converged': result.converged,
               'best_known_radius': summary.best_known_radius, 'contacts': len(summary.achieved_pairs)}],
             run, extra=extra)
        return
    rows = density_scan(n_max, seed, restarts, iters)
    emit(rows, run, extra={**extra, 'note': SCAN_NOTE})
    return EXIT_PASS if all(r['below_rho_inf'] for r in rows) else EXIT_FAIL


@cli.group()
def lattice():
    """Bialy lattice packings."""


def _lattice_spec(lattice_id, spec_path):
    if spec_path:
        return formats.read_packing_json(spec_path)
    return named_lattice(lattice_id)


def lattice_source(fn):
    fn = click.option('--spec', 'spec_path', type=click.Path(exists=True, dir_okay=False), default=None,
                      help='PackingSpec JSON instead of a named lattice')(fn)
    fn = click.option('--id', 'lattice_id', type=click.Choice(NAMED_LATTICES), default='sheared',
                      show_default=True)(fn)
    return fn


@lattice.command('verify')
@lattice_source
@click.option('--cutoff', type=float, default=None, help='Translate cutoff (default 2·longest basis vector + 6)')
@output_options
@command_boundary
def lattice_verify(lattice_id, spec_path, cutoff, output_format, out):
    """Certify that no two tubes overlap and list the contacts."""
    report = verify_nonoverlap(_lattice_spec(lattice_id, spec_path), cutoff)
    run = _run("lattice verify", output_format, out, input_path=spec_path)
    pairs = [{'kind': kind, 'motif_a': p.motif_a, 'motif_b': p.motif_b, 'translate': list(p.translate),
              'distance': p.distance} for kind, group in (('contact', report.contacts),
                                                          ('violation', report.violations)) for p in group]
    emit(pairs, run, columns=['kind', 'motif_a', 'motif_b', 'translate', 'distance'],
         extra={'lattice': report.spec.name, 'certified': report.certified, 'min_gap': report.min_gap,
                'pairs_checked': report.pairs_checked, 'cutoff': report.cutoff})
    return EXIT_PASS if report.certified else EXIT_FAIL


@lattice.command('density')
@lattice_source
@output_options
@command_boundary
def lattice_density(lattice_id, spec_path, output_format, out):
    """Analytic density of a certified lattice."""
    report = verify_nonoverlap(_lattice_spec(lattice_id, spec_path))
    run = _run("lattice density", output_format, out, input_path=spec_path)
    if not report.certified:
        raise InputError(f"{report.spec.name} does not certify; its tubes overlap")
    emit([{'lattice': report.spec.name, 'volume': report.spec.volume, 'density': analytic_density(report.spec),
           'rho_inf': hexagonal_cylinder_density()}], run)


@lattice.command('mc')
@lattice_source
@mc_options
@output_options
@command_boundary
def lattice_mc(lattice_id, spec_path, seed, samples, output_format, out):
    """Monte Carlo density of a certified lattice, checked against the analytic value."""
    report = verify_nonoverlap(_lattice_spec(lattice_id, spec_path))
    run = _run("lattice mc", output_format, out, seed, samples, spec_path)
    if not report.certified:
        raise InputError(f"{report.spec.name} does not certify; its tubes overlap")
    density = monte_carlo_density(report.spec, samples, seed)
    emit([{'lattice': report.spec.name, **density.as_dict(), 'agrees': density.agrees()}], run)
    return _mc_status(density, density.agrees())


@lattice.command('bialy')
@mc_options
@output_options
@command_boundary
def lattice_bialy(seed, samples, output_format, out):
    """Monte Carlo volume of a single bialy against 2π²."""
    run = _run("lattice bialy", output_format, out, seed, samples)
    report = bialy_volume_report(samples, seed)
    emit([{**report.as_dict(), 'agrees': report.agrees()}], run)
    return _mc_status(report, report.agrees(), scale=report.analytic)


@cli.group()
def revolved():
    """Packings of tori revolved about an axis."""


@revolved.command('profile')
@click.option('--rows', type=int, default=10, show_default=True)
@output_options
@command_boundary
def revolved_profile(rows, output_format, out):
    """Per-row and cumulative densities."""
    emit(revolved_density_profile(rows), _run("revolved profile", output_format, out))


@revolved.command('mc')
@click.option('--rows', type=int, default=1, show_default=True)
@mc_options
@output_options
@command_boundary
def revolved_mc(rows, seed, samples, output_format, out):
    """Monte Carlo check of the cumulative density of the first rows."""
    report = revolved_mc_report(rows, samples, seed)
    emit([{'rows': rows, **report.as_dict(), 'agrees': report.agrees()}],
         _run("revolved mc", output_format, out, seed, samples))
    return _mc_status(report, report.agrees())


@cli.command('paper-report')
@mc_options
@click.option('--restarts', type=int, default=8, show_default=True)
@click.option('--iters', type=int, default=400, show_default=True)
@output_options
@command_boundary
def reference_report_command(seed, samples, restarts, iters, output_format, out):
    """Recompute every explicit number and compare with the printed values."""
    rows = reference_report(seed, samples, restarts, iters)
    emit([r.as_dict() for r in rows], _run("paper-report", output_format, out, seed, samples),
         columns=['quantity', 'reference_value', 'computed', 'delta', 'tolerance', 'status', 'note'])
    return exit_status(rows)


cli.add_command(reference_report_command, "reference-report")


@cli.command('export-mesh')
@click.option('--id', 'lattice_id', type=click.Choice(NAMED_LATTICES), default=None,
              help='Export a block of this lattice')
@click.option('--curve', 'curve_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Export tubes around the components of this curve file')
@click.option('--block', type=int, default=3, show_default=True)
@click.option('--radius', type=float, default=None, help='Tube radius (default: the curve thickness)')
@click.option('--major', type=int, default=64, show_default=True)
@click.option('--minor', type=int, default=32, show_default=True)
@click.option('--out', 'out', type=click.Path(dir_okay=False), required=True, help='OBJ file to write')
@command_boundary
def export_mesh(lattice_id, curve_path, block, radius, major, minor, out):
    """Tube surfaces as an OBJ file; S³ curves are projected stereographically."""
    if lattice_id and curve_path:
        raise InputError("give either --id or --curve, not both")
    if lattice_id:
        report = verify_nonoverlap(named_lattice(lattice_id))
        if not report.certified:
            raise InputError(f"{lattice_id} does not certify")
        meshes = lattice_block_meshes(report.spec, block, major, minor)
    elif curve_path:
        link = formats.read_curve(curve_path)
        if radius is None:
            radius = (spherical_thickness(link) if link.ambient is Ambient.SPHERICAL
                      else euclidean_thickness(link))
            radius = min(radius, math.pi / 2 - 1e-6) if link.ambient is Ambient.SPHERICAL else radius
        meshes = link_meshes(link, radius, minor)
    else:
        meshes = [torus_mesh(named_lattice("stacked").motif[0], 1.0, major, minor, name="bialy")]
    try:
        write_obj(meshes, out)
    except OSError as e:
        raise InputError(f"cannot write {out}: {e.strerror}") from e
    click.echo(f"wrote {len(meshes)} tube meshes to {out}")


def main():
    cli(prog_name="thicklinks")


if __name__ == '__main__':
    main()
