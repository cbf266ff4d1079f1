"""Disk-chain text geometry: label generation, instance reconstruction,
rectification, losses and detection scoring."""

try:
    # Installed layout: the extension lives inside the package.
    from ._textsnake import (  # noqa: F401
        Detection,
        GeometryMaps,
        TextsnakeError,
        binarize,
        detect,
        disks_union_mask,
        edge_head_tail,
        extract_snake,
        fit_direction,
        generate_labels,
        load_maps,
        loss,
        mask_iou,
        match_and_score,
        min_area_rect,
        rasterize_polygon,
        rectify_instance,
        render_label_maps,
        save_maps,
        smoothed_l1,
        synth_snakes,
    )
except ImportError:
    # Development layout: the extension sits on sys.path (CMake build dir).
    from _textsnake import (  # noqa: F401
        Detection,
        GeometryMaps,
        TextsnakeError,
        binarize,
        detect,
        disks_union_mask,
        edge_head_tail,
        extract_snake,
        fit_direction,
        generate_labels,
        load_maps,
        loss,
        mask_iou,
        match_and_score,
        min_area_rect,
        rasterize_polygon,
        rectify_instance,
        render_label_maps,
        save_maps,
        smoothed_l1,
        synth_snakes,
    )

__all__ = [
    "Detection",
    "GeometryMaps",
    "TextsnakeError",
    "binarize",
    "detect",
    "disks_union_mask",
    "edge_head_tail",
    "extract_snake",
    "fit_direction",
    "generate_labels",
    "load_maps",
    "loss",
    "mask_iou",
    "match_and_score",
    "min_area_rect",
    "rasterize_polygon",
    "rectify_instance",
    "render_label_maps",
    "save_maps",
    "smoothed_l1",
    "synth_snakes",
]
