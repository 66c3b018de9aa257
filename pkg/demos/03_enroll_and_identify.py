"""
Enroll, re-compress, identify
=============================

The service scenario end to end: a user enrolls features of uploaded
JPEGs in a local store; the sharing platform re-compresses the uploads;
later, a downloaded copy is matched against the store to find which
original it came from.
"""
import tempfile
from pathlib import Path

import dcsign as dc

with tempfile.TemporaryDirectory() as tmp:
    db_path = Path(tmp) / "features.dcdb"
    store = dc.FeatureStore.open(db_path)

    # Enroll five similar photos, single-compressed at quality 85.
    uploads = {}
    for i in range(5):
        photo = dc.synthetic_photo(192, 144, seed=500 + i)
        coeff = dc.pixels_to_coefficients(photo, qf=85)
        name = f"photo{i}"
        store.enroll(coeff, th=14, image_id=name)
        uploads[name] = dc.encode_file(coeff)
    print(f"enrolled {len(store)} features in {db_path.name}")

    # The platform re-compresses photo2 at a different quality.
    downloaded = dc.recompress(uploads["photo2"], qf=78)
    print(f"\nsimulated platform copy: {len(uploads['photo2'])} -> "
          f"{len(downloaded)} bytes at quality 78")

    # Identification scans the whole store.
    query = dc.decode_file(downloaded)
    matches = dc.query_store(store, query)
    print(f"store scan returns: {matches}")
    assert matches == ["photo2"]

    # The per-feature verdicts show where each wrong candidate failed.
    print("\nper-feature verdicts:")
    for feature in store:
        verdict = dc.match_feature(feature, query)
        where = "" if verdict.matched else f" (first mismatch at block {verdict.mismatch_block})"
        print(f"  {feature.image_id}: {'match' if verdict.matched else 'different'}{where}")

    # Reopening the store sees the same records: appends are durable.
    assert len(dc.FeatureStore.open(db_path)) == 5
    print("\nstore reopened: 5 records intact")
