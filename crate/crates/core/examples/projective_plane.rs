//! PG(2, 4): point enumeration, joins and meets.

use unital_iso::plane::ProjectivePlane;

fn main() -> unital_iso::Result<()> {
    let plane = ProjectivePlane::over_quadratic(2)?;
    println!("PG(2, {}): {} points, {} lines", plane.order(), plane.points().len(), plane.lines().len());

    let (p, q) = (plane.points()[3], plane.points()[17]);
    let line = plane.line_through(&p, &q)?;
    let on = plane.points_on_line(&line);
    println!("line through points 3 and 17 has id {} and points {on:?}", plane.line_id(&line));

    let other = plane.lines()[0];
    let meet = plane.meet(&line, &other)?;
    println!("it meets line 0 in point {}", plane.point_id(&meet));
    assert!(plane.line_through(&p, &p).is_err());
    Ok(())
}
