import type { ViewBox } from './types.js';

export class RasterFailure extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'RasterFailure';
  }
}

/** Output raster dimensions: viewBox aspect, long edge 1024 px. */
export function rasterSize(viewBox: ViewBox): { width: number; height: number } {
  const long = 1024;
  if (viewBox.width >= viewBox.height) {
    return { width: long, height: Math.round((long * viewBox.height) / viewBox.width) };
  }
  return { width: Math.round((long * viewBox.width) / viewBox.height), height: long };
}

export function parseViewBox(svgText: string): ViewBox {
  const m = /viewBox\s*=\s*"([^"]+)"/.exec(svgText);
  if (!m) throw new RasterFailure('document has no viewBox');
  const nums = m[1]!.trim().split(/[\s,]+/).map(Number);
  if (nums.length !== 4 || nums.some((n) => !Number.isFinite(n))) {
    throw new RasterFailure(`unparseable viewBox: ${m[1]}`);
  }
  return { minX: nums[0]!, minY: nums[1]!, width: nums[2]!, height: nums[3]! };
}

/**
 * Rasterize the static (un-animated) document to a PNG for prompt
 * attachments. Browser-only; external resources that fail to load surface as
 * RasterFailure so the caller can send the prompt without a screenshot.
 */
export async function screenshotCurrent(svgText: string): Promise<Blob> {
  const { width, height } = rasterSize(parseViewBox(svgText));
  const url = URL.createObjectURL(new Blob([svgText], { type: 'image/svg+xml' }));
  try {
    const img = new Image();
    await new Promise<void>((resolve, reject) => {
      img.onload = () => resolve();
      img.onerror = () => reject(new RasterFailure('SVG image failed to load'));
      img.src = url;
    });
    const canvas = document.createElement('canvas');
    canvas.width = width;
    canvas.height = height;
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new RasterFailure('2d context unavailable');
    ctx.drawImage(img, 0, 0, width, height);
    const blob = await new Promise<Blob | null>((resolve) =>
      canvas.toBlob(resolve, 'image/png')
    );
    if (!blob) throw new RasterFailure('canvas produced no PNG');
    return blob;
  } catch (err) {
    if (err instanceof RasterFailure) throw err;
    throw new RasterFailure(String(err));
  } finally {
    URL.revokeObjectURL(url);
  }
}
